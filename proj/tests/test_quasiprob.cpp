#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qframe/quasiprob.hpp"

#include <cmath>
#include <optional>

using namespace qframe;

namespace {

DualPair standard_wootters_pair(int d) {
  const Frame f = renormalize(wootters_frame(d), Convention::standard);
  return make_dual_pair(f, canonical_dual(f));
}

Povm z_measurement(int d) {
  std::vector<HermitianOp> effects;
  for (int m = 0; m < d; ++m) {
    CMat p = CMat::Zero(d, d);
    p(m, m) = 1.0;
    effects.emplace_back(std::move(p));
  }
  return Povm(std::move(effects));
}

DensityOp basis_state(int d, int k) {
  CMat p = CMat::Zero(d, d);
  p(k, k) = 1.0;
  return DensityOp{HermitianOp(std::move(p))};
}

}  // namespace

TEST_CASE("rep_state: uniform for the maximally mixed state, sums to one") {
  const auto pair = standard_wootters_pair(3);
  const auto qd = rep_state(pair.frame, DensityOp{HermitianOp(CMat::Identity(3, 3) / 3.0)});
  double total = 0.0;
  for (int i = 0; i < qd.rep.size(); ++i) {
    CHECK(qd.rep.values[i] == doctest::Approx(qd.rep.values[0]).epsilon(1e-12));
    total += pair.frame.weights[i] * qd.rep.values[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rep_state: computational basis states are non-negative here") {
  const auto pair = standard_wootters_pair(3);
  for (int k = 0; k < 3; ++k) {
    const auto qd = rep_state(pair.frame, basis_state(3, k));
    for (double v : qd.rep.values) CHECK(v >= -1e-12);
  }
}

TEST_CASE("rep_state: affine in the state") {
  const Frame f = random_frame(3, 10, 61);
  const auto rho1 = random_state(3, 62);
  const auto rho2 = random_state(3, 63);
  const double p = 0.3;
  const CMat mix = p * rho1.op.m + (1.0 - p) * rho2.op.m;
  const auto mixed = rep_state(f, DensityOp{HermitianOp(mix)});
  const auto r1 = rep_state(f, rho1);
  const auto r2 = rep_state(f, rho2);
  for (int i = 0; i < f.size(); ++i) {
    CHECK(mixed.rep.values[i] ==
          doctest::Approx(p * r1.rep.values[i] + (1.0 - p) * r2.rep.values[i])
              .epsilon(1e-14));
  }
  CHECK_THROWS_AS(rep_state(f, random_state(2, 1)), DimensionError);
}

TEST_CASE("rep_effects: trivial POVM through the standard dual is constant 1") {
  const auto pair = standard_wootters_pair(3);
  std::vector<HermitianOp> one;
  one.emplace_back(CMat::Identity(3, 3));
  const Povm trivial(std::move(one));
  const auto reps = rep_effects(pair.dual, trivial, Via::dual_E);
  for (double v : reps.reps[0].values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rep_effects: pointwise completeness through the dual") {
  const auto pair = standard_wootters_pair(3);
  const auto reps = rep_effects(pair.dual, z_measurement(3), Via::dual_E);
  for (int a = 0; a < pair.dual.size(); ++a) {
    double s = 0.0;
    for (int k = 0; k < reps.outcomes(); ++k) s += reps.reps[k].values[a];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("rep_effects: pointwise completeness through the frame under standard") {
  // unit-trace elements make sum_k M_k(a) = tr F(a) = 1 on the frame side too
  const auto pair = standard_wootters_pair(3);
  const auto reps = rep_effects(pair.frame, random_povm(3, 4, 301), Via::frame_F);
  for (int a = 0; a < pair.frame.size(); ++a) {
    double s = 0.0;
    for (int k = 0; k < reps.outcomes(); ++k) s += reps.reps[k].values[a];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("rep_effects: swapping effects swaps representations") {
  const Frame f = random_frame(2, 5, 71);
  const Povm m = random_povm(2, 3, 72);
  std::vector<HermitianOp> swapped = {m.effects[1], m.effects[0], m.effects[2]};
  const Povm m2(std::move(swapped));
  const auto r = rep_effects(f, m, Via::frame_F);
  const auto r2 = rep_effects(f, m2, Via::frame_F);
  CHECK(r.reps[0].values == r2.reps[1].values);
  CHECK(r.reps[1].values == r2.reps[0].values);
}

TEST_CASE("convert_effect_rep: matches representing through the dual directly") {
  for (std::uint64_t seed : {3u, 4u}) {
    const Frame f = random_frame(3, 10, seed);
    const Frame e = canonical_dual(f);
    const Kernel2 theta = theta_kernel(e);
    const Povm m = random_povm(3, 4, seed + 10);
    const auto via_f = rep_effects(f, m, Via::frame_F);
    const auto converted = convert_effect_rep(via_f, theta, f);
    const auto direct = rep_effects(e, m, Via::dual_E);
    REQUIRE(converted.outcomes() == direct.outcomes());
    CHECK(converted.via == Via::dual_E);
    for (int k = 0; k < direct.outcomes(); ++k) {
      for (int a = 0; a < f.size(); ++a) {
        CHECK(converted.reps[k].values[a] ==
              doctest::Approx(direct.reps[k].values[a]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("convert_effect_rep: trivial POVM lands on the dual identity values") {
  const Frame f = leonhardt_frame(2);
  const Frame e = canonical_dual(f);
  std::vector<HermitianOp> one;
  one.emplace_back(CMat::Identity(2, 2));
  const auto via_f = rep_effects(f, Povm(std::move(one)), Via::frame_F);
  const auto converted = convert_effect_rep(via_f, theta_kernel(e), f);
  for (int a = 0; a < f.size(); ++a) {
    CHECK(converted.reps[0].values[a] ==
          doctest::Approx(hs_inner(e.elements[a], CMat::Identity(2, 2))).epsilon(1e-10));
  }
}

TEST_CASE("convert_effect_rep: zero effect stays zero, mismatches rejected") {
  const Frame f = random_frame(2, 5, 81);
  const Frame e = canonical_dual(f);
  // a POVM padded with an all-zero effect
  CMat z = CMat::Zero(2, 2);
  std::vector<HermitianOp> effects = {HermitianOp(CMat::Identity(2, 2)), HermitianOp(z)};
  const auto via_f = rep_effects(f, Povm(std::move(effects)), Via::frame_F);
  const auto converted = convert_effect_rep(via_f, theta_kernel(e), f);
  for (double v : converted.reps[1].values) CHECK(std::abs(v) < 1e-12);

  const auto wrong_via = rep_effects(e, random_povm(2, 2, 5), Via::dual_E);
  CHECK_THROWS_AS(convert_effect_rep(wrong_via, theta_kernel(e), f), ValidationError);
  const Frame other = random_frame(2, 6, 99);
  const auto reps_other = rep_effects(other, random_povm(2, 2, 6), Via::frame_F);
  CHECK_THROWS_AS(convert_effect_rep(reps_other, theta_kernel(e), f), DimensionError);
}

TEST_CASE("deformed_prob and total_prob: pinned maximally mixed case") {
  const auto pair = standard_wootters_pair(3);
  const auto rho = rep_state(pair.frame, DensityOp{HermitianOp(CMat::Identity(3, 3) / 3.0)});
  const Povm zm = z_measurement(3);
  const auto mf = rep_effects(pair.frame, zm, Via::frame_F);
  const auto me = rep_effects(pair.dual, zm, Via::dual_E);
  for (int k = 0; k < 3; ++k) {
    CHECK(deformed_prob(rho, mf, pair, k) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(total_prob(rho, me, pair, k) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("born rule triangle on random inputs") {
  // raw wootters pair with its canonical dual
  {
    const Frame f = wootters_frame(3);
    const auto pair = make_dual_pair(f, canonical_dual(f));
    const Kernel2 theta = theta_kernel(pair.dual);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto rho = random_state(3, 900 + seed);
      const Povm m = random_povm(3, 3, 950 + seed);
      const auto rr = rep_state(pair.frame, rho);
      const auto mf = rep_effects(pair.frame, m, Via::frame_F);
      const auto me = rep_effects(pair.dual, m, Via::dual_E);
      for (int k = 0; k < m.outcomes(); ++k) {
        const double exact = born_rule(rho, m, k);
        CHECK(deformed_prob(rr, mf, pair, theta, k) == doctest::Approx(exact).epsilon(1e-10));
        CHECK(total_prob(rr, me, pair, k) == doctest::Approx(exact).epsilon(1e-10));
      }
    }
  }
  // leonhardt with the closed-form dual
  {
    const Frame f = leonhardt_frame(2);
    const auto pd = paper_dual(FrameKind::leonhardt, 2);
    const auto pair = make_dual_pair(f, pd.dual);
    const Kernel2 theta = theta_kernel(pair.dual);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto rho = random_state(2, 700 + seed);
      const Povm m = random_povm(2, 4, 750 + seed);
      const auto rr = rep_state(pair.frame, rho);
      const auto mf = rep_effects(pair.frame, m, Via::frame_F);
      const auto me = rep_effects(pair.dual, m, Via::dual_E);
      double sum = 0.0;
      for (int k = 0; k < m.outcomes(); ++k) {
        const double exact = born_rule(rho, m, k);
        CHECK(deformed_prob(rr, mf, pair, theta, k) == doctest::Approx(exact).epsilon(1e-10));
        const double tp = total_prob(rr, me, pair, k);
        CHECK(tp == doctest::Approx(exact).epsilon(1e-10));
        sum += tp;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("probability routes reject mismatched inputs") {
  const Frame f = wootters_frame(3);
  const auto pair = make_dual_pair(f, canonical_dual(f));
  const auto rho = rep_state(pair.frame, random_state(3, 1));
  const Povm m = random_povm(3, 3, 2);
  const auto mf = rep_effects(pair.frame, m, Via::frame_F);
  const auto me = rep_effects(pair.dual, m, Via::dual_E);

  CHECK_THROWS_AS(deformed_prob(rho, me, pair, 0), ValidationError);  // wrong side
  CHECK_THROWS_AS(total_prob(rho, mf, pair, 0), ValidationError);
  CHECK_THROWS_AS(total_prob(rho, me, pair, 7), DimensionError);

  // a non-dual pair is refused at construction
  CHECK_THROWS_AS(make_dual_pair(f, f), ValidationError);

  // reps computed through an unrelated frame are refused
  const Frame other = random_frame(3, 9, 5);
  const auto foreign = rep_state(other, random_state(3, 1));
  CHECK_THROWS_AS(deformed_prob(foreign, mf, pair, 0), DimensionError);
}

TEST_CASE("law_of_total_probability: indicator measurements recover subset weights") {
  const std::vector<double> w = {0.5, 1.0, 1.5, 2.0, 0.25, 0.75};
  std::vector<double> rho = {0.1, 0.2, 0.05, 0.15, 0.8, 0.4};
  double norm = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) norm += w[i] * rho[i];
  for (auto& v : rho) v /= norm;
  const std::vector<double> chi1 = {1, 1, 1, 0, 0, 0};
  const std::vector<double> chi2 = {0, 0, 0, 1, 1, 1};
  double expected1 = 0.0;
  for (int i = 0; i < 3; ++i) expected1 += w[i] * rho[i];
  const double p1 = law_of_total_probability(w, rho, chi1);
  const double p2 = law_of_total_probability(w, rho, chi2);
  CHECK(p1 == doctest::Approx(expected1).epsilon(1e-14));
  CHECK(p1 + p2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("negativity: report fields") {
  RepFunction rep;
  rep.values = {0.25, 0.5, 0.25};
  const std::vector<double> w = {1.0, 1.0, 1.0};
  auto r = negativity(rep, w);
  CHECK(r.min_value == 0.25);
  CHECK(r.negative_mass == 0.0);
  CHECK(r.count_negative == 0);

  rep.values = {0.5, -0.2, 0.7};
  r = negativity(rep, {2.0, 3.0, 1.0});
  CHECK(r.min_value == doctest::Approx(-0.2));
  CHECK(r.negative_mass == doctest::Approx(0.6));
  CHECK(r.count_negative == 1);

  // homogeneity: scaling the rep scales the mass
  RepFunction scaled = rep;
  for (auto& v : scaled.values) v *= 3.0;
  const auto r3 = negativity(scaled, {2.0, 3.0, 1.0});
  CHECK(r3.negative_mass == doctest::Approx(3.0 * r.negative_mass));
}

TEST_CASE("negativity: random pure states go negative in the wootters representation") {
  const auto pair = standard_wootters_pair(3);
  Rng rng(2025);
  int found = 0;
  double most_negative = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const CVec v = haar_vector(3, rng);
    const auto qd = rep_state(pair.frame, DensityOp{HermitianOp(v * v.adjoint())});
    const auto rep = negativity(qd.rep, pair.frame.weights);
    if (rep.min_value < -1e-6) {
      ++found;
      most_negative = std::min(most_negative, rep.min_value);
    }
  }
  CHECK(found > 0);
  MESSAGE("negative-rep pure states found: ", found, "/200, min value ", most_negative);
}

TEST_CASE("classicality_check: basis states with the Z measurement are classical") {
  const auto pair = standard_wootters_pair(3);
  std::vector<DensityOp> states;
  for (int k = 0; k < 3; ++k) states.push_back(basis_state(3, k));
  std::vector<Povm> povms;
  povms.push_back(z_measurement(3));
  const auto report = classicality_check(pair, states, povms);
  CHECK(report.classical_for_this_pair);
  CHECK(report.violations.empty());
}

TEST_CASE("classicality_check: a negative-representation state is flagged") {
  const auto pair = standard_wootters_pair(3);
  // scan for a pure state with a negative representation, as in the
  // negativity test
  Rng rng(2025);
  std::optional<DensityOp> bad;
  for (int trial = 0; trial < 200 && !bad; ++trial) {
    const CVec v = haar_vector(3, rng);
    DensityOp rho{HermitianOp(v * v.adjoint())};
    const auto qd = rep_state(pair.frame, rho);
    if (negativity(qd.rep, pair.frame.weights).min_value < -1e-6) bad = rho;
  }
  REQUIRE(bad.has_value());

  std::vector<DensityOp> states;
  for (int k = 0; k < 3; ++k) states.push_back(basis_state(3, k));
  states.push_back(*bad);
  std::vector<Povm> povms;
  povms.push_back(z_measurement(3));
  const auto report = classicality_check(pair, states, povms);
  CHECK_FALSE(report.classical_for_this_pair);
  REQUIRE_FALSE(report.violations.empty());
  bool state_violation_on_added = false;
  for (const auto& v : report.violations) {
    if (v.kind == ClassicalityViolation::Kind::state_negative && v.object == 3) {
      state_violation_on_added = true;
      CHECK(v.value < -1e-6);
    }
  }
  CHECK(state_violation_on_added);
}

TEST_CASE("classicality_check: empty inputs are vacuously classical") {
  const auto pair = standard_wootters_pair(3);
  const auto report = classicality_check(pair, {}, {});
  CHECK(report.classical_for_this_pair);
}

TEST_CASE("no-go corollary: positive frames always show effect-side negativity") {
  // For a positive frame the state representations are non-negative by
  // construction, so any violation must appear on the effect side once the
  // POVM probes the dual's negative directions. The probe POVM is built
  // around the worst eigenvector of the canonical dual.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d = 2 + static_cast<int>(seed % 2);
    const Frame f = random_frame(d, d * d + 2, 4000 + seed, /*positive=*/true);
    const Frame e = canonical_dual(f);
    const auto pair = make_dual_pair(f, e);

    // worst dual eigenvector
    double lam = 0.0;
    CVec psi;
    for (const auto& el : e.elements) {
      Eigen::SelfAdjointEigenSolver<CMat> es(el);
      if (es.eigenvalues()(0) < lam) {
        lam = es.eigenvalues()(0);
        psi = es.eigenvectors().col(0);
      }
    }
    REQUIRE(lam < -1e-10);  // the no-go theorem at work

    // IC POVM with one effect aligned to psi
    Rng rng(7000 + seed);
    bool violated = false;
    for (double eps : {0.05, 0.01, 0.002}) {
      std::vector<CMat> raw;
      raw.push_back(psi * psi.adjoint());
      for (int j = 0; j < d * d; ++j) {
        const CVec v = haar_vector(d, rng);
        raw.push_back(eps * (v * v.adjoint()));
      }
      CMat s = CMat::Zero(d, d);
      for (const auto& r : raw) s += r;
      Eigen::SelfAdjointEigenSolver<CMat> es(s);
      const CMat isq = es.eigenvectors() *
                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                       es.eigenvectors().adjoint();
      std::vector<HermitianOp> effects;
      for (const auto& r : raw) {
        CMat m = isq * r * isq;
        effects.emplace_back(0.5 * (m + m.adjoint()));
      }
      Povm povm(std::move(effects));
      REQUIRE(oracle::span_rank(raw) == d * d);  // informationally complete

      // spanning states: mixed state plus small pushes along a basis
      std::vector<DensityOp> states;
      states.push_back(DensityOp{HermitianOp(CMat::Identity(d, d) / d)});
      const auto basis = herm_basis(d);
      for (int i = 1; i < d * d; ++i) {
        states.push_back(DensityOp{HermitianOp(CMat::Identity(d, d) / d +
                                               (0.2 / d) * basis[i])});
      }

      const auto report = classicality_check(pair, states, {povm});
      bool state_side = false;
      for (const auto& v : report.violations) {
        if (v.kind == ClassicalityViolation::Kind::state_negative) state_side = true;
        if (v.kind == ClassicalityViolation::Kind::effect_negative) violated = true;
      }
      CHECK_FALSE(state_side);  // positive frame: states stay non-negative
      if (violated) break;
    }
    CHECK(violated);
  }
}
