#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "pdwave/spectral.hpp"

using namespace pdwave;

TEST_CASE("synthesize_time single-tone DC", "[spectral]") {
  TransformPlan plan(1, 4);
  const cvec s = synthesize_time({cplx(1.0, 0.0)}, plan);
  REQUIRE(s.size() == 4);
  for (const cplx& v : s) {
    CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-15);
  }
}

TEST_CASE("synthesize_time geometric sum at m=0", "[spectral]") {
  TransformPlan plan(4, 4);
  const cvec s = synthesize_time(cvec(4, cplx(1.0, 0.0)), plan);
  CHECK(std::abs(s[0] - cplx(4.0, 0.0)) < 1e-12);
}

TEST_CASE("transforms match the dense matrix forms", "[spectral]") {
  Philox rng(42, 1);
  for (int n : {1, 2, 3, 5, 8, 16, 31, 64}) {
    TransformPlan plan(n, 4);
    const cvec x = oracles::random_cvec(n, rng);
    const cvec s = synthesize_time(x, plan);
    const cvec s_ref = oracles::dense_synthesize(x, plan.m);
    for (int i = 0; i < plan.m; ++i) {
      REQUIRE(std::abs(s[i] - s_ref[i]) < 1e-10);
    }

    const cvec g = oracles::random_cvec(plan.m, rng);
    const cvec b = analyze_freq(g, plan);
    const cvec b_ref = oracles::dense_analyze(g, n);
    for (int i = 0; i < n; ++i) {
      REQUIRE(std::abs(b[i] - b_ref[i]) < 1e-10);
    }
  }
}

TEST_CASE("analyze_freq picks DC content", "[spectral]") {
  TransformPlan plan(2, 4);
  const cvec b = analyze_freq(cvec(8, cplx(1.0, 0.0)), plan);
  CHECK(std::abs(b[0] - cplx(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(b[1]) < 1e-12);
}

TEST_CASE("round trip and Parseval", "[spectral]") {
  Philox rng(7, 0);
  for (int n : {4, 64, 100}) {
    TransformPlan plan(n, 4);
    const cvec x = oracles::random_cvec(n, rng);
    const cvec s = synthesize_time(x, plan);
    const cvec back = analyze_freq(s, plan);

    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += std::norm(back[i] - x[i]);
      den += std::norm(x[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-9);

    const double es = detail::energy(s);
    const double ex = detail::energy(x);
    CHECK(std::abs(es - plan.m * ex) / (plan.m * ex) < 1e-9);
  }
}

TEST_CASE("dimension mismatches throw", "[spectral]") {
  TransformPlan plan(8, 4);
  CHECK_THROWS_AS(synthesize_time(cvec(7), plan), std::invalid_argument);
  CHECK_THROWS_AS(analyze_freq(cvec(8), plan), std::invalid_argument);
  CHECK_THROWS_AS(TransformPlan(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(TransformPlan(8, 0), std::invalid_argument);
}

TEST_CASE("wrap_phase", "[spectral]") {
  CHECK(wrap_phase(3.0 * kPi / 2.0) == Catch::Approx(-kPi / 2.0).margin(1e-15));
  CHECK(wrap_phase(-kPi) == Catch::Approx(kPi).margin(1e-15));
  CHECK(wrap_phase(0.4128) == Catch::Approx(0.4128).margin(1e-15));
  CHECK(wrap_phase(kPi) == Catch::Approx(kPi).margin(1e-15));
  CHECK(wrap_phase(7.0 * kPi) == Catch::Approx(kPi).margin(1e-12));
  CHECK_THROWS_AS(wrap_phase(std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS(wrap_phase(std::numeric_limits<double>::quiet_NaN()), std::domain_error);

  Philox rng(3, 0);
  for (int i = 0; i < 2000; ++i) {
    const double phi = 50.0 * (2.0 * rng.next_double() - 1.0);
    const double w = wrap_phase(phi);
    REQUIRE(w > -kPi);
    REQUIRE(w <= kPi);
    // same angle modulo 2pi
    REQUIRE(std::abs(std::remainder(w - phi, kTwoPi)) < 1e-9);
  }
}

TEST_CASE("papr basics", "[spectral]") {
  CHECK(papr(cvec(16, cplx(0.5, -0.5))) == Catch::Approx(1.0));
  CHECK(papr_db(cvec(16, cplx(0.5, -0.5))) == Catch::Approx(0.0).margin(1e-12));

  cvec spike = {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)};
  CHECK(papr(spike) == Catch::Approx(4.0));
  CHECK(papr_db(spike) == Catch::Approx(6.0206).margin(1e-3));

  CHECK_THROWS_AS(papr(cvec(4, cplx(0.0, 0.0))), std::domain_error);
  CHECK_THROWS_AS(papr(cvec{}), std::invalid_argument);
}

TEST_CASE("papr is scale invariant", "[spectral]") {
  Philox rng(11, 0);
  const cvec s = oracles::random_cvec(64, rng);
  const double base = papr(s);
  for (cplx scale : {cplx(2.0, 0.0), cplx(0.0, -3.0), cplx(1e-6, 1e-6)}) {
    cvec t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) t[i] = scale * s[i];
    CHECK(papr(t) == Catch::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("QPSK OFDM PAPR lands in the usual range", "[spectral]") {
  Philox rng(21, 0);
  TransformPlan plan(1024, 4);
  std::vector<double> vals;
  for (int t = 0; t < 100; ++t) {
    cvec x(1024);
    for (int i = 0; i < 1024; ++i) {
      x[i] = std::polar(1.0, kPi / 4.0 + kPi / 2.0 * (rng.next_u32() & 3));
    }
    vals.push_back(papr_db(synthesize_time(x, plan)));
  }
  std::sort(vals.begin(), vals.end());
  CHECK(vals.front() > 6.5);
  CHECK(vals[vals.size() / 2] > 8.0);
  CHECK(vals[vals.size() / 2] < 10.5);
  CHECK(vals.back() > 9.0);   // the tail reaches the 9-13 dB region
  CHECK(vals.back() < 13.5);
}
