#include "langprop/labels.hpp"

namespace langprop {

namespace {
constexpr std::array<std::string_view, kNumLangs> kCodes{"es", "pt", "ca",
                                                         "en", "gl", "eu"};
}

std::string_view to_code(Lang lang) {
  return kCodes[static_cast<std::size_t>(lang)];
}

std::optional<Lang> lang_from_code(std::string_view code) {
  for (std::size_t i = 0; i < kNumLangs; ++i) {
    if (kCodes[i] == code) return static_cast<Lang>(i);
  }
  return std::nullopt;
}

double LabelDistribution::sum() const {
  double total = 0.0;
  for (double v : values_) total += v;
  return total;
}

LabelDistribution LabelDistribution::normalized() const {
  const double total = sum();
  if (total <= 0.0) return uniform();
  LabelDistribution out;
  for (std::size_t i = 0; i < kNumLangs; ++i) out.values_[i] = values_[i] / total;
  return out;
}

LabelDistribution LabelDistribution::point_mass(Lang lang) {
  LabelDistribution out;
  out[lang] = 1.0;
  return out;
}

LabelDistribution LabelDistribution::uniform() {
  LabelDistribution out;
  for (double& v : out.values_) v = 1.0 / static_cast<double>(kNumLangs);
  return out;
}

}  // namespace langprop
