#include "daseg/align.h"

#include <algorithm>

#include "daseg/error.h"

namespace daseg {
namespace {

int WordCount(const Segmentation& s) { return s.empty() ? 0 : s.back().end + 1; }

}  // namespace

int SegmentAlignment::Count(EditOp op) const {
  return static_cast<int>(std::count_if(
      ops.begin(), ops.end(), [op](const AlignedPair& p) { return p.op == op; }));
}

bool SegmentsEqual(const FunctionalSegment& a, const FunctionalSegment& b,
                   AlignMode mode) {
  if (a.start != b.start || a.end != b.end) return false;
  return mode == AlignMode::kBoundary || a.act == b.act;
}

SegmentAlignment AlignSegments(const Segmentation& ref,
                               const Segmentation& hyp, AlignMode mode) {
  if (WordCount(ref) != WordCount(hyp)) {
    throw Error("cannot align segmentations of " +
                std::to_string(WordCount(ref)) + " and " +
                std::to_string(WordCount(hyp)) + " words");
  }
  const size_t r = ref.size(), h = hyp.size();
  const size_t cols = h + 1;
  std::vector<int> dist((r + 1) * cols);
  auto at = [&](size_t i, size_t j) -> int& { return dist[i * cols + j]; };
  for (size_t j = 0; j <= h; ++j) at(0, j) = static_cast<int>(j);
  for (size_t i = 1; i <= r; ++i) {
    at(i, 0) = static_cast<int>(i);
    for (size_t j = 1; j <= h; ++j) {
      const int diag =
          at(i - 1, j - 1) + (SegmentsEqual(ref[i - 1], hyp[j - 1], mode) ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  SegmentAlignment out;
  out.mode = mode;
  size_t i = r, j = h;
  while (i > 0 || j > 0) {
    const int d = at(i, j);
    if (i > 0 && j > 0) {
      const bool equal = SegmentsEqual(ref[i - 1], hyp[j - 1], mode);
      if (equal && d == at(i - 1, j - 1)) {
        out.ops.push_back({EditOp::kMatch, int(i - 1), int(j - 1)});
        --i, --j;
        continue;
      }
      if (!equal && d == at(i - 1, j - 1) + 1) {
        out.ops.push_back({EditOp::kSubstitute, int(i - 1), int(j - 1)});
        --i, --j;
        continue;
      }
    }
    if (i > 0 && d == at(i - 1, j) + 1) {
      out.ops.push_back({EditOp::kDelete, int(i - 1), -1});
      --i;
    } else {
      out.ops.push_back({EditOp::kInsert, -1, int(j - 1)});
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

}  // namespace daseg
