#pragma once

// Generated by tools/golden_oracle. Do not edit; rerun the tool instead.

namespace spinfreeze::golden {

inline constexpr double kFig2dMaxLeakage = 0.012445060737271686;  // max(P_ge + P_ee), expm steps of 1e-4 us
inline constexpr double kFig4dMaxDeviation = 0.018644313723388373;  // max |P_gN - 0.5|, expm steps of 1e-4 us
inline constexpr double kWernerHalfDiscord = 0.18193947877023003;  // Werner p = 0.5, natural log, 1000 x 1000 grid

}  // namespace spinfreeze::golden
