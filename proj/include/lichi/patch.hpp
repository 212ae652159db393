#ifndef LICHI_PATCH_HPP
#define LICHI_PATCH_HPP

#include <cstdint>
#include <vector>

#include "lichi/image.hpp"
#include "lichi/linalg.hpp"

namespace lichi {

/// Top-left corner of a square patch.
struct PatchIndex {
    int row = 0;
    int col = 0;

    bool operator==(const PatchIndex&) const = default;
};

/// One reference patch and its k-1 nearest neighbors. Columns of `matrix`
/// are the flattened member patches, sorted by ascending squared-l2 distance
/// to the reference (ties broken by ascending row-major linear index, so the
/// reference is column 0 unless an exact duplicate precedes it).
struct PatchGroup {
    PatchIndex ref;
    int ref_col = 0;                  // position of `ref` inside `members`
    std::vector<PatchIndex> members;  // size k
    Matrix matrix;                    // n x k
};

/// All patch groups extracted from one image.
struct GroupSet {
    std::vector<PatchGroup> groups;
    int patch_side = 0;
    int group_size = 0;
    int height = 0;  // source image dimensions
    int width = 0;
};

/// Reference lattice {0, step, 2*step, ...} per axis with the last valid
/// index appended so borders are always covered (the "step trick").
std::vector<PatchIndex> reference_positions(int height, int width,
                                            int patch_side, int step);

/// k-nearest-neighbor search within a window x window area centered on the
/// reference patch, clipped at image borders. Distances are exact squared-l2
/// in double precision.
PatchGroup block_match(const Image& img, PatchIndex ref, int patch_side,
                       int k, int window);

/// pi: one group per reference position.
GroupSet extract_groups(const Image& img, int patch_side, int k, int window,
                        int step);

/// extract_groups without retaining the similarity matrices (geometry only);
/// block matching is parallelized over reference positions.
GroupSet match_geometry(const Image& img, int patch_side, int k, int window,
                        int step, int threads);

/// Reads patches of `img` at the positions stored in `gs` (reuses the
/// geometry, no re-matching).
std::vector<Matrix> gather(const Image& img, const GroupSet& gs);

/// Reads one group's patches into a preallocated n x k matrix.
void gather_group(const Image& img, const PatchGroup& g, int patch_side,
                  Matrix& out);

/// pi^-1: repositions estimates and averages every occurrence covering each
/// pixel. The result is independent of processing order.
Image aggregate(const GroupSet& gs, const std::vector<Matrix>& estimates);

/// Streaming aggregation helper: sum/count accumulators with a final divide.
class Aggregator {
public:
    Aggregator(int height, int width);
    void add(const PatchGroup& g, int patch_side, const Matrix& estimate);
    Image finish() const;  // throws if any pixel is uncovered

private:
    Image sum_;
    std::vector<std::uint32_t> count_;
};

/// rho: one estimate per pixel, taken from the covering reference patch
/// whose center is nearest (seeded hash tie-break, deterministic).
Image select_single(const GroupSet& gs, const std::vector<Matrix>& estimates,
                    std::uint64_t seed);

}  // namespace lichi

#endif
