#include <cmath>

#include "gwpdyn/errors.hpp"
#include "gwpdyn/propagators.hpp"

namespace gwp {

namespace {

// First half plus middle element of palindromic optimal tables.

// Kahan & Li (1997), s9odr6a
const double kKahanLi6[] = {
    0.39216144400731413928,  0.33259913678935943860, -0.70624617255763935981,
    0.082213596293550800230, 0.79854399093482996340,
};

// Kahan & Li (1997), s17odr8a
const double kKahanLi8[] = {
    0.13020248308889008088,  0.56116298177510838456, -0.38947496264484728641,
    0.15884190655515560090,  -0.39590389413323757734, 0.18453964097831570709,
    0.25837438768632204729,  0.29501172360931029887,  -0.60550853383003451170,
};

// Sofroniou & Spaletta (2005), s35odr10
const double kSofroniouSpaletta10[] = {
    0.07879572252168641926390768,  0.31309610341510852776481247,
    0.02791838323507806610952027,  -0.22959284159390709415121340,
    0.13096206107716486317465686,  -0.26973340565451071434460973,
    0.07497334315589143566613711,  0.11199342399981020488957508,
    0.36613344954622675119314812,  -0.39910563013603589787862981,
    0.10308739852747107731580277,  0.41143087395589023782070412,
    -0.00486636058313526176219566, -0.39203335370863990644808194,
    0.05194250296244964703718290,  0.05066509075992449633587434,
    0.04967437063972987905456880,  0.04931773575959453791768001,
};

template <size_t N>
std::vector<double> palindrome(const double (&half)[N]) {
  std::vector<double> g(half, half + N);
  for (int i = static_cast<int>(N) - 2; i >= 0; --i) g.push_back(half[i]);
  return g;
}

CompositionLevel triple_jump_level(int p) {
  const double g1 = 1.0 / (2.0 - std::pow(2.0, 1.0 / (p + 1)));
  return {{g1, 1.0 - 2.0 * g1, g1}, p, p + 2};
}

CompositionLevel suzuki_level(int p) {
  const double g1 = 1.0 / (4.0 - std::pow(4.0, 1.0 / (p + 1)));
  return {{g1, g1, 1.0 - 4.0 * g1, g1, g1}, p, p + 2};
}

}  // namespace

std::vector<CompositionLevel> composition_coefficients(Scheme scheme, int target_order) {
  if (target_order < 4 || target_order > 10 || target_order % 2 != 0)
    fail(ErrorCode::unsupported, "composition order must be even and in 4..10");
  std::vector<CompositionLevel> levels;
  switch (scheme) {
    case Scheme::triple_jump:
      for (int p = 2; p < target_order; p += 2) levels.push_back(triple_jump_level(p));
      break;
    case Scheme::suzuki:
      for (int p = 2; p < target_order; p += 2) levels.push_back(suzuki_level(p));
      break;
    case Scheme::optimal:
      switch (target_order) {
        case 4: levels.push_back(suzuki_level(2)); break;
        case 6: levels.push_back({palindrome(kKahanLi6), 2, 6}); break;
        case 8: levels.push_back({palindrome(kKahanLi8), 2, 8}); break;
        case 10: levels.push_back({palindrome(kSofroniouSpaletta10), 2, 10}); break;
      }
      break;
    case Scheme::none:
      fail(ErrorCode::unsupported, "scheme none has no composition levels");
  }
  return levels;
}

std::vector<Substep> substep_program(const IntegratorSpec& spec) {
  spec.validate();
  if (spec.base == Base::rk4) fail(ErrorCode::unsupported, "RK4 has no splitting program");
  std::vector<Substep> prog;
  if (spec.base == Base::vtv)
    prog = {{FlowKind::potential, 0.5}, {FlowKind::kinetic, 1.0}, {FlowKind::potential, 0.5}};
  else
    prog = {{FlowKind::kinetic, 0.5}, {FlowKind::potential, 1.0}, {FlowKind::kinetic, 0.5}};

  if (spec.order > 2) {
    for (const auto& level : composition_coefficients(spec.scheme, spec.order)) {
      std::vector<Substep> next;
      next.reserve(prog.size() * level.gammas.size());
      for (double g : level.gammas)
        for (const auto& s : prog) next.push_back({s.kind, s.fraction * g});
      prog = std::move(next);
    }
  }

  if (spec.fuse) {
    std::vector<Substep> fused;
    for (const auto& s : prog) {
      if (!fused.empty() && fused.back().kind == s.kind)
        fused.back().fraction += s.fraction;
      else
        fused.push_back(s);
    }
    prog = std::move(fused);
  }
  return prog;
}

}  // namespace gwp
