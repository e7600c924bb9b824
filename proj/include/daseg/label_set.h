#ifndef DASEG_LABEL_SET_H_
#define DASEG_LABEL_SET_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace daseg {

enum class Granularity {
  kSwda42,
  kMrdaBasic5,
  kMrdaGeneral12,
  kMrdaFull51,
  kPure1,
  kCustom,
};

std::string_view GranularityName(Granularity g);
Granularity ParseGranularity(std::string_view name);

// One per-word label of the joint coding: either the shared inside label I,
// or E_<act> marking the last word of a functional segment. Internally the
// act is an index into the owning LabelSet; index() gives the dense joint
// index used by the tagger and the metrics (I = 0, E_acts[k] = k + 1).
class JointLabel {
 public:
  constexpr JointLabel() = default;

  static constexpr JointLabel Inside() { return JointLabel(); }
  static constexpr JointLabel End(int act) { return JointLabel(act); }
  static constexpr JointLabel FromIndex(int index) {
    return JointLabel(index - 1);
  }

  constexpr bool is_end() const { return act_ >= 0; }
  constexpr int act() const { return act_; }
  constexpr int index() const { return act_ + 1; }

  friend constexpr auto operator<=>(JointLabel, JointLabel) = default;

 private:
  constexpr explicit JointLabel(int act) : act_(act) {}
  int act_ = -1;
};

// An ordered act inventory plus the fallback act used to close a trailing
// run of I labels at decode time.
class LabelSet {
 public:
  LabelSet(Granularity granularity, std::vector<std::string> acts,
           std::string fallback_act);

  static LabelSet Swda42();
  static LabelSet MrdaBasic();
  static LabelSet MrdaGeneral();
  static LabelSet MrdaFull();
  static LabelSet Pure();
  static LabelSet ForGranularity(Granularity g);

  Granularity granularity() const { return granularity_; }
  std::string_view name() const { return GranularityName(granularity_); }
  const std::vector<std::string>& acts() const { return acts_; }
  const std::string& fallback_act() const { return acts_[fallback_]; }
  int fallback_index() const { return fallback_; }
  int size() const { return static_cast<int>(acts_.size()); }
  int joint_size() const { return size() + 1; }

  std::optional<int> Find(std::string_view act) const;
  // Throws daseg::Error naming the act when it is not in the inventory.
  int IndexOf(std::string_view act) const;
  bool Contains(std::string_view act) const { return Find(act).has_value(); }

  std::string JointName(JointLabel label) const;
  // Parses "I" or "E_<act>"; throws daseg::Error otherwise.
  JointLabel ParseJoint(std::string_view text) const;

  friend bool operator==(const LabelSet& a, const LabelSet& b) {
    return a.granularity_ == b.granularity_ && a.acts_ == b.acts_ &&
           a.fallback_ == b.fallback_;
  }

 private:
  Granularity granularity_;
  std::vector<std::string> acts_;
  int fallback_ = 0;
  std::unordered_map<std::string, int> index_;
};

// Native tag tables used by the importers. Keys are the cluster/short tags
// found in the distributions, values are act names of the matching LabelSet.
const std::vector<std::pair<std::string, std::string>>& SwdaDamslTags();
const std::vector<std::pair<std::string, std::string>>& MrdaBasicTags();
const std::vector<std::pair<std::string, std::string>>& MrdaGeneralTags();
const std::vector<std::pair<std::string, std::string>>& MrdaFullTags();

inline constexpr std::string_view kPureAct = "Segment";

}  // namespace daseg

#endif  // DASEG_LABEL_SET_H_
