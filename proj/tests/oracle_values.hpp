#pragma once

// Reference values produced by tests/oracles/oracles.py (mpmath, closed forms,
// and a Chebyshev collocation of the transfer operator). They share no code
// with the library under test.

namespace oracle {

inline constexpr int kFibonacciWordsDepth3 = 5;
inline constexpr int kFibonacciPrimitivityLength = 1;

// |(s_1 o s_1)'| on [0,1] for x -> 1/(1+x).
inline constexpr double kCfWord11Sup = 0.25;
inline constexpr double kCfWord11Inf = 0.11111111111111111;

// Continued-fraction digits {1,2}, t = 0.6, depth 6, exact endpoint sup/inf.
inline constexpr double kCfN2T06D6ZSup = 0.81799320881368728;
inline constexpr double kCfN2T06D6ZInf = 0.48472615627435796;

inline constexpr double kGoldenLimitH = 0.6942419136306173;
// h_n for the golden truncations n = 2..12.
inline constexpr double kGoldenH[13] = {0.0,
                                        0.0,
                                        0.40568523137582455,
                                        0.55146308974559555,
                                        0.61744683101891257,
                                        0.65089992001162248,
                                        0.66903164153965979,
                                        0.67928626374726409,
                                        0.68525190995828488,
                                        0.68878944938713116,
                                        0.6909148105379266,
                                        0.6922032797598174,
                                        0.69298924363996075};
inline constexpr double kGoldenP3At05 = 0.098535328501439745;
inline constexpr double kGoldenP3At08 = -0.46495978059314532;
inline constexpr double kGoldenN2Mass0 = 0.56984029099805327;
inline constexpr double kGoldenN2Mass1 = 0.43015970900194673;
inline constexpr double kSingularityQ_2_4 = 0.70181653245698725;

// Dimension of the set of continued fractions with digits in {1,2}, {1,2,3}.
inline constexpr double kCfDimension12 = 0.5312805062772052;
inline constexpr double kCfDimension123 = 0.7056609080287375;

inline constexpr double kGoldenRatio = 1.6180339887498948;
inline constexpr double kKsCritical1e4 = 0.01358;
// Equilibrium state of log|s'| for similitude ratios (0.2, 0.4): Bernoulli(1/3, 2/3).
inline constexpr double kBernoulliEntropy = 0.63651416829481282;
inline constexpr double kBernoulliLyapunov = 1.1473397920608035;
inline constexpr double kBernoulliRatio = 0.55477389758402158;

}  // namespace oracle
