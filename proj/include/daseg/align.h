#ifndef DASEG_ALIGN_H_
#define DASEG_ALIGN_H_

#include <string>
#include <vector>

#include "daseg/corpus.h"

namespace daseg {

enum class AlignMode {
  kBoundary,  // equal iff (start, end) are identical
  kLabeled,   // additionally requires the same act
};

enum class EditOp { kMatch, kSubstitute, kDelete, kInsert };

// ref is -1 for insertions, hyp is -1 for deletions.
struct AlignedPair {
  EditOp op;
  int ref = -1;
  int hyp = -1;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct SegmentAlignment {
  AlignMode mode = AlignMode::kBoundary;
  std::vector<AlignedPair> ops;

  int Count(EditOp op) const;
  int distance() const { return static_cast<int>(ops.size()) - Count(EditOp::kMatch); }
};

bool SegmentsEqual(const FunctionalSegment& a, const FunctionalSegment& b,
                   AlignMode mode);

// Minimal unit-cost edit alignment of two segmentations of the same words.
// Backtrace ties prefer match > substitute > delete > insert.
SegmentAlignment AlignSegments(const Segmentation& ref,
                               const Segmentation& hyp, AlignMode mode);

}  // namespace daseg

#endif  // DASEG_ALIGN_H_
