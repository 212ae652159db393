#include "lichi/patch.hpp"

#include <algorithm>
#include <cstdint>

#include "lichi/noise.hpp"
#include "lichi/parallel.hpp"

namespace lichi {

namespace {

long linear_index(PatchIndex p, int width) {
    return static_cast<long>(p.row) * width + p.col;
}

double patch_distance(const Image& img, PatchIndex a, PatchIndex b, int s) {
    double d = 0.0;
    for (int r = 0; r < s; ++r) {
        const double* pa = img.data().data() +
                           static_cast<std::size_t>(a.row + r) * img.width() +
                           a.col;
        const double* pb = img.data().data() +
                           static_cast<std::size_t>(b.row + r) * img.width() +
                           b.col;
        for (int c = 0; c < s; ++c) {
            const double diff = pa[c] - pb[c];
            d += diff * diff;
        }
    }
    return d;
}

}  // namespace

std::vector<PatchIndex> reference_positions(int height, int width,
                                            int patch_side, int step) {
    if (step < 1) throw ConfigError("step must be >= 1");
    if (patch_side > height || patch_side > width)
        throw ConfigError("patch larger than image");
    auto axis = [&](int extent) {
        std::vector<int> v;
        const int last = extent - patch_side;
        for (int p = 0; p < last; p += step) v.push_back(p);
        v.push_back(last);  // force border coverage
        return v;
    };
    const auto rows = axis(height);
    const auto cols = axis(width);
    std::vector<PatchIndex> out;
    out.reserve(rows.size() * cols.size());
    for (int r : rows)
        for (int c : cols) out.push_back({r, c});
    return out;
}

PatchGroup block_match(const Image& img, PatchIndex ref, int patch_side,
                       int k, int window) {
    const int s = patch_side;
    if (k < 1) throw ConfigError("group size must be >= 1");
    if (window < s) throw ConfigError("search window smaller than patch");
    // Candidate top-left corners such that the whole patch stays inside the
    // window x window area centered on the reference patch, clipped at
    // image borders.
    const int half = (window - s) / 2;
    const int r0 = std::max(0, ref.row - half);
    const int r1 = std::min(img.height() - s, ref.row + half);
    const int c0 = std::max(0, ref.col - half);
    const int c1 = std::min(img.width() - s, ref.col + half);
    const long candidates =
        static_cast<long>(r1 - r0 + 1) * (c1 - c0 + 1);
    if (candidates < k)
        throw ConfigError("block_match: fewer than k candidate patches");

    struct Scored {
        double dist;
        PatchIndex pos;
    };
    std::vector<Scored> scored;
    scored.reserve(candidates);
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c)
            scored.push_back({patch_distance(img, ref, {r, c}, s), {r, c}});

    auto cmp = [&](const Scored& a, const Scored& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return linear_index(a.pos, img.width()) <
               linear_index(b.pos, img.width());
    };
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(), cmp);

    PatchGroup g;
    g.ref = ref;
    g.ref_col = 0;
    g.members.reserve(k);
    g.matrix.resize(s * s, k);
    for (int j = 0; j < k; ++j) {
        g.members.push_back(scored[j].pos);
        if (scored[j].pos == ref) g.ref_col = j;
    }
    for (int j = 0; j < k; ++j) {
        const PatchIndex p = g.members[j];
        int idx = 0;
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c)
                g.matrix(idx++, j) = img(p.row + r, p.col + c);
    }
    return g;
}

GroupSet extract_groups(const Image& img, int patch_side, int k, int window,
                        int step) {
    GroupSet gs;
    gs.patch_side = patch_side;
    gs.group_size = k;
    gs.height = img.height();
    gs.width = img.width();
    const auto refs = reference_positions(img.height(), img.width(),
                                          patch_side, step);
    gs.groups.reserve(refs.size());
    for (const auto& ref : refs)
        gs.groups.push_back(block_match(img, ref, patch_side, k, window));
    return gs;
}

GroupSet match_geometry(const Image& img, int patch_side, int k, int window,
                        int step, int threads) {
    GroupSet gs;
    gs.patch_side = patch_side;
    gs.group_size = k;
    gs.height = img.height();
    gs.width = img.width();
    const auto refs = reference_positions(img.height(), img.width(),
                                          patch_side, step);
    gs.groups.resize(refs.size());
    parallel_for(refs.size(), threads, [&](std::size_t i) {
        gs.groups[i] = block_match(img, refs[i], patch_side, k, window);
        gs.groups[i].matrix.resize(0, 0);  // keep geometry only
    });
    return gs;
}

void gather_group(const Image& img, const PatchGroup& g, int patch_side,
                  Matrix& out) {
    const int s = patch_side;
    const int k = static_cast<int>(g.members.size());
    out.resize(s * s, k);
    for (int j = 0; j < k; ++j) {
        const PatchIndex p = g.members[j];
        int idx = 0;
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c)
                out(idx++, j) = img(p.row + r, p.col + c);
    }
}

std::vector<Matrix> gather(const Image& img, const GroupSet& gs) {
    if (img.height() != gs.height || img.width() != gs.width)
        throw ConfigError("gather: image dimensions do not match group set");
    std::vector<Matrix> out(gs.groups.size());
    for (std::size_t i = 0; i < gs.groups.size(); ++i)
        gather_group(img, gs.groups[i], gs.patch_side, out[i]);
    return out;
}

Aggregator::Aggregator(int height, int width)
    : sum_(height, width, 0.0),
      count_(static_cast<std::size_t>(height) * width, 0) {}

void Aggregator::add(const PatchGroup& g, int patch_side,
                     const Matrix& estimate) {
    const int s = patch_side;
    for (std::size_t j = 0; j < g.members.size(); ++j) {
        const PatchIndex p = g.members[j];
        int idx = 0;
        for (int r = 0; r < s; ++r) {
            const std::size_t row_off =
                static_cast<std::size_t>(p.row + r) * sum_.width() + p.col;
            for (int c = 0; c < s; ++c, ++idx) {
                sum_.data()[row_off + c] += estimate(idx, j);
                ++count_[row_off + c];
            }
        }
    }
}

Image Aggregator::finish() const {
    Image out(sum_.height(), sum_.width());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (count_[i] == 0)
            throw Error("aggregate: uncovered pixel (coverage invariant "
                        "violated)");
        out[i] = sum_[i] / count_[i];
    }
    return out;
}

Image aggregate(const GroupSet& gs, const std::vector<Matrix>& estimates) {
    if (estimates.size() != gs.groups.size())
        throw ConfigError("aggregate: estimate count does not match groups");
    Aggregator acc(gs.height, gs.width);
    for (std::size_t i = 0; i < gs.groups.size(); ++i) {
        const auto& e = estimates[i];
        if (e.rows() != gs.patch_side * gs.patch_side ||
            e.cols() != static_cast<long>(gs.groups[i].members.size()))
            throw ConfigError("aggregate: estimate shape mismatch");
        acc.add(gs.groups[i], gs.patch_side, e);
    }
    return acc.finish();
}

Image select_single(const GroupSet& gs, const std::vector<Matrix>& estimates,
                    std::uint64_t seed) {
    if (estimates.size() != gs.groups.size())
        throw ConfigError("select_single: estimate count does not match "
                          "groups");
    const int s = gs.patch_side;
    const int h = gs.height;
    const int w = gs.width;
    // For each pixel, take the estimate from the denoised reference patch
    // whose most central pixels are closest to it. For odd patch sides and
    // step 1 this is exactly the central-pixel rule; remaining ties are
    // broken by a seeded hash so the choice is random but reproducible.
    struct Pick {
        long dist2 = -1;  // -1 means uncovered
        std::uint64_t tie = 0;
    };
    std::vector<Pick> best(static_cast<std::size_t>(h) * w);
    std::vector<double> value(static_cast<std::size_t>(h) * w, 0.0);
    std::vector<bool> covered(static_cast<std::size_t>(h) * w, false);

    for (std::size_t i = 0; i < gs.groups.size(); ++i) {
        const PatchGroup& g = gs.groups[i];
        const PatchIndex p = g.ref;
        // patch center in half-pixel units (exact for even sides too)
        const long cr2 = 2L * p.row + (s - 1);
        const long cc2 = 2L * p.col + (s - 1);
        int idx = 0;
        for (int r = 0; r < s; ++r) {
            for (int c = 0; c < s; ++c, ++idx) {
                const std::size_t pix =
                    static_cast<std::size_t>(p.row + r) * w + (p.col + c);
                const long dr = 2L * (p.row + r) - cr2;
                const long dc = 2L * (p.col + c) - cc2;
                const long dist2 = dr * dr + dc * dc;
                const std::uint64_t tie = rng::mix(
                    seed, (static_cast<std::uint64_t>(pix) << 24) ^ i);
                if (!covered[pix] || dist2 < best[pix].dist2 ||
                    (dist2 == best[pix].dist2 && tie < best[pix].tie)) {
                    covered[pix] = true;
                    best[pix] = {dist2, tie};
                    value[pix] = estimates[i](idx, g.ref_col);
                }
            }
        }
    }
    for (std::size_t pix = 0; pix < covered.size(); ++pix)
        if (!covered[pix])
            throw Error("select_single: uncovered pixel");
    Image out(h, w);
    out.data() = value;
    return out;
}

}  // namespace lichi
