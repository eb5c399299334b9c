#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace langprop {

// Target languages, in the fixed order used for reports and tie-breaking.
enum class Lang : std::uint8_t { Es, Pt, Ca, En, Gl, Eu };

inline constexpr std::size_t kNumLangs = 6;

inline constexpr std::array<Lang, kNumLangs> kAllLangs{
    Lang::Es, Lang::Pt, Lang::Ca, Lang::En, Lang::Gl, Lang::Eu};

std::string_view to_code(Lang lang);
std::optional<Lang> lang_from_code(std::string_view code);

/// Per-language non-negative scores. seed_distribution, normalize and the
/// social renormalization produce rows summing to 1; combine emits raw
/// scores. Languages not set are 0.
class LabelDistribution {
 public:
  LabelDistribution() = default;

  double& operator[](Lang lang) { return values_[static_cast<std::size_t>(lang)]; }
  double operator[](Lang lang) const { return values_[static_cast<std::size_t>(lang)]; }

  double sum() const;

  /// Divides every entry by the sum; an all-zero input becomes uniform.
  LabelDistribution normalized() const;

  static LabelDistribution point_mass(Lang lang);
  static LabelDistribution uniform();

  const std::array<double, kNumLangs>& values() const { return values_; }

  bool operator==(const LabelDistribution&) const = default;

 private:
  std::array<double, kNumLangs> values_{};
};

}  // namespace langprop
