#pragma once
// Generated by hand_values.py (exact rational arithmetic); do not edit.
namespace oracle {
inline constexpr double f2_balanced = 0.0; // 0
inline constexpr double f1_origin_b3_u2 = 6.0; // 6
inline constexpr double y_lambda_c11_1_c12_half_xrg_1 = 0.6931471805599453;
inline constexpr double y_sb_c20_5_c21_2_xta_half = 4.0; // 4
inline constexpr double x_rg_from_y0 = 2.0; // 2
inline constexpr double x_ta_eq_xrg_1 = 0.6666666666666666; // 2/3
inline constexpr double x_su_eq_xrg_1_xta_half = 0.5; // 1/2
inline constexpr double y_sb_eq_composed = 3.6666666666666665; // 11/3
inline constexpr double x_su_eq_composed = 0.5555555555555556; // 5/9
inline constexpr double corner_a_minus = 1.1; // 11/10
inline constexpr double corner_b_minus = 0.9; // 9/10
inline constexpr double width_single_ratio_1p5 = 0.025; // 1/40
} // namespace oracle
