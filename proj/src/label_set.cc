#include "daseg/label_set.h"

#include <algorithm>
#include <unordered_set>

#include "daseg/error.h"

namespace daseg {
namespace {

using TagTable = std::vector<std::pair<std::string, std::string>>;

std::vector<std::string> ActsOf(const TagTable& table) {
  std::vector<std::string> acts;
  acts.reserve(table.size());
  for (const auto& [tag, act] : table) acts.push_back(act);
  return acts;
}

}  // namespace

std::string_view GranularityName(Granularity g) {
  switch (g) {
    case Granularity::kSwda42: return "swda42";
    case Granularity::kMrdaBasic5: return "mrda_basic5";
    case Granularity::kMrdaGeneral12: return "mrda_general12";
    case Granularity::kMrdaFull51: return "mrda_full51";
    case Granularity::kPure1: return "pure1";
    case Granularity::kCustom: return "custom";
  }
  return "custom";
}

Granularity ParseGranularity(std::string_view name) {
  for (Granularity g :
       {Granularity::kSwda42, Granularity::kMrdaBasic5,
        Granularity::kMrdaGeneral12, Granularity::kMrdaFull51,
        Granularity::kPure1, Granularity::kCustom}) {
    if (GranularityName(g) == name) return g;
  }
  throw Error("unknown label set granularity '" + std::string(name) + "'");
}

LabelSet::LabelSet(Granularity granularity, std::vector<std::string> acts,
                   std::string fallback_act)
    : granularity_(granularity), acts_(std::move(acts)) {
  if (acts_.empty()) throw Error("label set must contain at least one act");
  for (int i = 0; i < size(); ++i) {
    if (acts_[i].empty()) throw Error("label set contains an empty act name");
    if (!index_.emplace(acts_[i], i).second) {
      throw Error("duplicate act '" + acts_[i] + "' in label set");
    }
  }
  auto it = index_.find(fallback_act);
  if (it == index_.end()) {
    throw Error("fallback act '" + fallback_act + "' is not in the label set");
  }
  fallback_ = it->second;

  static constexpr std::pair<Granularity, int> kExpected[] = {
      {Granularity::kSwda42, 42},       {Granularity::kMrdaBasic5, 5},
      {Granularity::kMrdaGeneral12, 12}, {Granularity::kMrdaFull51, 51},
      {Granularity::kPure1, 1}};
  for (auto [g, n] : kExpected) {
    if (g == granularity_ && size() != n) {
      throw Error("label set " + std::string(name()) + " must have " +
                  std::to_string(n) + " acts, got " + std::to_string(size()));
    }
  }
}

LabelSet LabelSet::Swda42() {
  return LabelSet(Granularity::kSwda42, ActsOf(SwdaDamslTags()),
                  "Statement-non-opinion");
}

LabelSet LabelSet::MrdaBasic() {
  return LabelSet(Granularity::kMrdaBasic5, ActsOf(MrdaBasicTags()),
                  "Statement");
}

LabelSet LabelSet::MrdaGeneral() {
  return LabelSet(Granularity::kMrdaGeneral12, ActsOf(MrdaGeneralTags()),
                  "Statement");
}

LabelSet LabelSet::MrdaFull() {
  return LabelSet(Granularity::kMrdaFull51, ActsOf(MrdaFullTags()),
                  "Statement");
}

LabelSet LabelSet::Pure() {
  return LabelSet(Granularity::kPure1, {std::string(kPureAct)},
                  std::string(kPureAct));
}

LabelSet LabelSet::ForGranularity(Granularity g) {
  switch (g) {
    case Granularity::kSwda42: return Swda42();
    case Granularity::kMrdaBasic5: return MrdaBasic();
    case Granularity::kMrdaGeneral12: return MrdaGeneral();
    case Granularity::kMrdaFull51: return MrdaFull();
    case Granularity::kPure1: return Pure();
    case Granularity::kCustom: break;
  }
  throw Error("custom label sets have no built-in inventory");
}

std::optional<int> LabelSet::Find(std::string_view act) const {
  auto it = index_.find(std::string(act));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int LabelSet::IndexOf(std::string_view act) const {
  if (auto i = Find(act)) return *i;
  throw Error("act '" + std::string(act) + "' is not in label set " +
              std::string(name()));
}

std::string LabelSet::JointName(JointLabel label) const {
  if (!label.is_end()) return "I";
  return "E_" + acts_.at(label.act());
}

JointLabel LabelSet::ParseJoint(std::string_view text) const {
  if (text == "I") return JointLabel::Inside();
  if (text.size() > 2 && text.substr(0, 2) == "E_") {
    if (auto i = Find(text.substr(2))) return JointLabel::End(*i);
    throw Error("unknown act '" + std::string(text.substr(2)) +
                "' in label '" + std::string(text) + "'");
  }
  throw Error("malformed joint label '" + std::string(text) + "'");
}

// Clustered SWBD-DAMSL tags, most frequent first. The abandoned tag is
// folded into Uninterpretable by the importer before lookup.
const TagTable& SwdaDamslTags() {
  static const TagTable table = {
      {"sd", "Statement-non-opinion"},
      {"b", "Acknowledge-Backchannel"},
      {"sv", "Statement-opinion"},
      {"aa", "Agree-Accept"},
      {"%", "Uninterpretable"},
      {"ba", "Appreciation"},
      {"qy", "Yes-No-Question"},
      {"x", "Non-verbal"},
      {"ny", "Yes-answers"},
      {"fc", "Conventional-closing"},
      {"qw", "Wh-Question"},
      {"nn", "No-answers"},
      {"bk", "Response-Acknowledgement"},
      {"h", "Hedge"},
      {"qy^d", "Declarative-Yes-No-Question"},
      {"fo_o_fw_\"_by_bc", "Other"},
      {"bh", "Backchannel-in-question-form"},
      {"^q", "Quotation"},
      {"bf", "Summarize/reformulate"},
      {"na", "Affirmative-non-yes-answers"},
      {"ad", "Action-directive"},
      {"^2", "Collaborative-Completion"},
      {"b^m", "Repeat-phrase"},
      {"qo", "Open-Question"},
      {"qh", "Rhetorical-Questions"},
      {"^h", "Hold-before-answer-agreement"},
      {"ar", "Reject"},
      {"ng", "Negative-non-no-answers"},
      {"br", "Signal-non-understanding"},
      {"no", "Other-answers"},
      {"fp", "Conventional-opening"},
      {"qrr", "Or-Clause"},
      {"arp_nd", "Dispreferred-answers"},
      {"t3", "3rd-party-talk"},
      {"oo_co_cc", "Offers-Options-Commits"},
      {"t1", "Self-talk"},
      {"bd", "Downplayer"},
      {"aap_am", "Maybe-Accept-part"},
      {"^g", "Tag-Question"},
      {"qw^d", "Declarative-Wh-Question"},
      {"fa", "Apology"},
      {"ft", "Thanking"},
  };
  return table;
}

const TagTable& MrdaBasicTags() {
  static const TagTable table = {
      {"S", "Statement"},
      {"Q", "Question"},
      {"B", "Backchannel"},
      {"D", "Disruption"},
      {"F", "Floor-Grabber"},
  };
  return table;
}

const TagTable& MrdaGeneralTags() {
  static const TagTable table = {
      {"s", "Statement"},
      {"b", "Continuer"},
      {"fh", "Floor-Holder"},
      {"qy", "Yes-No-Question"},
      {"%", "Interrupted-Abandoned-Uninterpretable"},
      {"fg", "Floor-Grabber"},
      {"qr", "Or-Question"},
      {"qw", "Wh-Question"},
      {"h", "Hold-Before-Answer-Agreement"},
      {"qrr", "Or-Clause"},
      {"qh", "Rhetorical-Question"},
      {"qo", "Open-Ended-Question"},
  };
  return table;
}

const TagTable& MrdaFullTags() {
  static const TagTable table = {
      {"s", "Statement"},
      {"b", "Continuer"},
      {"fh", "Floor-Holder"},
      {"bk", "Acknowledge-Answer"},
      {"aa", "Accept"},
      {"df", "Defending-Explanation"},
      {"e", "Expansions-of-Yes-No-Answers"},
      {"%", "Interrupted-Abandoned-Uninterpretable"},
      {"rt", "Rising-Tone"},
      {"fg", "Floor-Grabber"},
      {"cs", "Offer"},
      {"ba", "Assessment-Appreciation"},
      {"bu", "Understanding-Check"},
      {"d", "Declarative-Question"},
      {"na", "Affirmative-Non-Yes-Answer"},
      {"qw", "Wh-Question"},
      {"ar", "Reject"},
      {"2", "Collaborative-Completion"},
      {"no", "Other-Answers"},
      {"h", "Hold-Before-Answer-Agreement"},
      {"co", "Action-Directive"},
      {"qy", "Yes-No-Question"},
      {"nd", "Dispreferred-Answers"},
      {"j", "Humorous-Material"},
      {"bd", "Downplayer"},
      {"cc", "Commit"},
      {"ng", "Negative-Non-No-Answers"},
      {"am", "Maybe"},
      {"qrr", "Or-Clause"},
      {"fe", "Exclamation"},
      {"m", "Mimic-Other"},
      {"fa", "Apology"},
      {"t", "About-Task"},
      {"br", "Signal-Non-Understanding"},
      {"aap", "Accept-Part"},
      {"qh", "Rhetorical-Question"},
      {"tc", "Topic-Change"},
      {"r", "Repeat"},
      {"t1", "Self-Talk"},
      {"t3", "Third-Party-Talk"},
      {"bh", "Rhetorical-Question-Backchannel"},
      {"arp", "Partial-Reject"},
      {"bs", "Reformulate-Summarize"},
      {"f", "Follow-Me"},
      {"qr", "Or-Question"},
      {"ft", "Thanking"},
      {"g", "Tag-Question"},
      {"qo", "Open-Question"},
      {"bc", "Correct-Misspeaking"},
      {"by", "Sympathy"},
      {"fw", "Welcome"},
  };
  return table;
}

}  // namespace daseg
