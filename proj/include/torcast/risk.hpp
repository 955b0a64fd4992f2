#pragma once

#include <array>
#include <optional>
#include <string>

namespace torcast {

/// Categorical tornado risk level. The enum value is the percent number,
/// which doubles as the natural total order.
enum class RiskLevel : int {
    pct0 = 0,
    pct2 = 2,
    pct5 = 5,
    pct10 = 10,
    pct15 = 15,
    pct30 = 30,
    pct45 = 45,
    pct60 = 60,
};

inline constexpr std::array<RiskLevel, 8> kAllRiskLevels = {
    RiskLevel::pct0,  RiskLevel::pct2,  RiskLevel::pct5,  RiskLevel::pct10,
    RiskLevel::pct15, RiskLevel::pct30, RiskLevel::pct45, RiskLevel::pct60,
};

/// Non-zero levels in ascending order (the levels a forecast may carry).
inline constexpr std::array<RiskLevel, 7> kNonZeroRiskLevels = {
    RiskLevel::pct2,  RiskLevel::pct5,  RiskLevel::pct10, RiskLevel::pct15,
    RiskLevel::pct30, RiskLevel::pct45, RiskLevel::pct60,
};

/// Aggregation weight: 0% -> 1, otherwise the percent value itself.
constexpr int risk_weight(RiskLevel level) {
    return level == RiskLevel::pct0 ? 1 : static_cast<int>(level);
}

/// Canonical label, "0%" .. "60%".
std::string risk_label(RiskLevel level);

/// Parses "2%", "2", "30%", ... Returns nullopt for anything outside the
/// closed SPC level set.
std::optional<RiskLevel> parse_risk_label(const std::string& text);

/// Categorical threshold for a probability value. Half-open brackets:
/// [0.02,0.05) -> 2%, [0.05,0.10) -> 5%, [0.10,0.15) -> 10%,
/// [0.15,0.30) -> 15%, [0.30,0.45) -> 30%, [0.45,0.60) -> 45%,
/// [0.60,1] -> 60%; below 0.02 -> 0%.
constexpr RiskLevel categorize_probability(double p) {
    if (p >= 0.60) return RiskLevel::pct60;
    if (p >= 0.45) return RiskLevel::pct45;
    if (p >= 0.30) return RiskLevel::pct30;
    if (p >= 0.15) return RiskLevel::pct15;
    if (p >= 0.10) return RiskLevel::pct10;
    if (p >= 0.05) return RiskLevel::pct5;
    if (p >= 0.02) return RiskLevel::pct2;
    return RiskLevel::pct0;
}

}  // namespace torcast
