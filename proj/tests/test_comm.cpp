#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "pdwave/comm.hpp"

using namespace pdwave;

TEST_CASE("apply_channel noiseless cases", "[comm]") {
  Philox rng(1, 0);
  const cvec x = oracles::random_cvec(32, rng);

  ChannelSample clean;  // h = 1, no noise
  CHECK(apply_channel(x, clean, rng) == x);

  ChannelSample rotated;
  rotated.h = cplx(0.0, 1.0);
  const cvec y = apply_channel(x, rotated, rng);
  for (int i = 0; i < 32; ++i) REQUIRE(std::abs(y[i] - cplx(0.0, 1.0) * x[i]) < 1e-15);

  ChannelSample bad;
  bad.noise_var = -1.0;
  CHECK_THROWS_AS(apply_channel(x, bad, rng), std::invalid_argument);
}

TEST_CASE("apply_channel noise power matches the requested variance", "[comm]") {
  Philox rng(2, 9);
  const cvec x(1000, cplx(0.0, 0.0));
  ChannelSample ch;
  ch.noise_var = 0.73;
  double acc = 0.0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    const cvec y = apply_channel(x, ch, rng);
    for (const cplx& v : y) acc += std::norm(v);
  }
  acc /= 1000.0 * reps;
  CHECK(std::abs(acc - ch.noise_var) / ch.noise_var < 0.02);
}

TEST_CASE("equalize", "[comm]") {
  Philox rng(3, 0);
  const cvec x = oracles::random_cvec(16, rng);
  const cplx h(0.3, -1.2);
  cvec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = h * x[i];
  bool erased = true;
  const cvec z = equalize(y, h, &erased);
  CHECK_FALSE(erased);
  for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(z[i] - x[i]) < 1e-12);

  CHECK(equalize(x, cplx(1.0, 0.0)) == x);

  const cvec zero = equalize(x, cplx(0.0, 0.0), &erased);
  CHECK(erased);
  for (const cplx& v : zero) REQUIRE(v == cplx(0.0, 0.0));

  const cvec tiny = equalize(x, cplx(1e-12, 0.0));
  for (const cplx& v : tiny) REQUIRE(std::isfinite(std::abs(v)));
}

TEST_CASE("AWGN theory curve anchors", "[comm]") {
  // order-4 evaluation of the printed expression at 0 dB: 0.75 * Q(sqrt(0.8))
  const double expected = 0.75 * 0.5 * std::erfc(std::sqrt(0.8) / std::sqrt(2.0));
  CHECK(ber_theory_awgn(0.0, 4) == Catch::Approx(expected).epsilon(1e-12));
  CHECK(ber_theory_awgn(0.0, 4) == Catch::Approx(0.13919).margin(1e-5));

  CHECK(ber_theory_awgn(60.0, 4) < 1e-12);  // vanishes at high SNR

  double prev = 1.0;
  for (double e = 0.0; e <= 30.0; e += 1.0) {
    const double p = ber_theory_awgn(e, 4);
    REQUIRE(p < prev);
    prev = p;
  }

  // order-2 instantiation is the exact Gray-QPSK curve Q(sqrt(2 g))
  for (double e : {0.0, 4.0, 8.0, 12.0}) {
    const double g = std::pow(10.0, e / 10.0);
    CHECK(qpsk_ber_awgn(e) == Catch::Approx(0.5 * std::erfc(std::sqrt(g))).epsilon(1e-12));
  }
}

TEST_CASE("Rayleigh theory curve anchors", "[comm]") {
  CHECK(ber_theory_rayleigh(-100.0, 4) == Catch::Approx(0.375).margin(1e-4));
  CHECK(ber_theory_rayleigh(100.0, 4) < 1e-4);
  const double expected = 0.375 * (1.0 - std::sqrt(0.4 / 1.4));
  CHECK(ber_theory_rayleigh(0.0, 4) == Catch::Approx(expected).epsilon(1e-12));
  CHECK(ber_theory_rayleigh(0.0, 4) == Catch::Approx(0.174554).margin(1e-6));

  // order-2 instantiation equals the exact QPSK flat-fading form
  for (double e : {0.0, 10.0, 20.0}) {
    const double g = std::pow(10.0, e / 10.0);
    CHECK(qpsk_ber_rayleigh(e) == Catch::Approx(0.5 * (1.0 - std::sqrt(g / (g + 1.0)))).epsilon(1e-12));
  }
}

TEST_CASE("noiseless BER is exactly zero for phase-constrained designs", "[comm][slow]") {
  BerMethod method;
  method.kind = BerMethod::Kind::plpoi;
  method.solver.theta = 0.6;
  const auto points = ber_montecarlo(method, ChannelKind::awgn, {200.0}, 4, 5, 64);
  REQUIRE(points.size() == 1);
  CHECK(points[0].errors == 0);
  CHECK(points[0].ber == 0.0);
}

TEST_CASE("plain OFDM Monte Carlo tracks the exact QPSK curve", "[comm][slow]") {
  BerMethod method;  // plain OFDM
  const int trials = 200;
  const int n = 256;
  const auto points = ber_montecarlo(method, ChannelKind::awgn, {2.0, 6.0}, trials, 77, n);
  for (const auto& p : points) {
    const double theory = qpsk_ber_awgn(p.ebn0_db);
    const double bits = 2.0 * n * trials;
    const double se = std::sqrt(theory * (1.0 - theory) / bits);
    REQUIRE(std::abs(p.ber - theory) <= 4.0 * se);
  }
}

TEST_CASE("Rayleigh Monte Carlo is in the right regime at low SNR", "[comm][slow]") {
  BerMethod method;
  const int trials = 400;
  const auto points = ber_montecarlo(method, ChannelKind::rayleigh, {5.0}, trials, 78, 256);
  const double theory = qpsk_ber_rayleigh(5.0);
  // one fade per symbol: tolerance reflects the fade count, not the bit count
  CHECK(points[0].ber == Catch::Approx(theory).epsilon(0.25));
}

TEST_CASE("baseline at w=1 reproduces plain OFDM bit-for-bit", "[comm][slow]") {
  BerMethod plain;
  BerMethod baseline;
  baseline.kind = BerMethod::Kind::baseline;
  baseline.weight = 1.0;
  const std::vector<double> grid = {4.0, 8.0};
  const auto a = ber_montecarlo(plain, ChannelKind::awgn, grid, 50, 9, 128);
  const auto b = ber_montecarlo(baseline, ChannelKind::awgn, grid, 50, 9, 128);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(a[i].errors == b[i].errors);
  }
}

TEST_CASE("BER is invariant to the channel phase in distribution", "[comm][slow]") {
  // same noise magnitudes, rotated gain: error counts agree statistically
  BerMethod method;
  method.kind = BerMethod::Kind::plpoi;
  method.solver.theta = 0.5;
  const int trials = 30;
  const int n = 64;
  const double ebn0 = 8.0;
  const double nv = noise_var_from_ebn0_db(ebn0);

  long long errs_unit = 0, errs_rot = 0;
  for (int t = 0; t < trials; ++t) {
    Philox bit_rng(200, detail::make_stream(detail::kStreamBits, 0, t));
    const InfoSpectrum c = modulate_qpsk(random_bits(2 * n, bit_rng));
    const cvec x = solve(c, method.solver).spectrum.values;
    for (int variant = 0; variant < 2; ++variant) {
      ChannelSample ch;
      ch.noise_var = nv;
      ch.h = variant == 0 ? cplx(1.0, 0.0) : std::polar(1.0, 1.1);
      Philox noise_rng(201, detail::make_stream(detail::kStreamNoise, variant, t));
      const auto decided = demodulate_qpsk(equalize(apply_channel(x, ch, noise_rng), ch.h));
      long long e = 0;
      for (std::size_t i = 0; i < decided.size(); ++i) e += decided[i] != c.bits[i];
      (variant == 0 ? errs_unit : errs_rot) += e;
    }
  }
  const double total_bits = 2.0 * n * trials;
  const double p = (errs_unit + errs_rot) / (2.0 * total_bits);
  const double se = std::sqrt(std::max(p * (1 - p), 1e-9) * 2.0 * total_bits);
  CHECK(std::abs(static_cast<double>(errs_unit - errs_rot)) <= 5.0 * se + 10.0);
}

TEST_CASE("BER trends down with SNR under paired seeds", "[comm][slow]") {
  BerMethod method;
  const auto points = ber_montecarlo(method, ChannelKind::awgn, {0.0, 6.0, 12.0}, 100, 10, 128);
  REQUIRE(points[0].errors > points[1].errors);
  REQUIRE(points[1].errors >= points[2].errors);
}

TEST_CASE("ber_montecarlo validates inputs", "[comm]") {
  BerMethod method;
  CHECK_THROWS_AS(ber_montecarlo(method, ChannelKind::awgn, {0.0}, 0, 1, 8),
                  std::invalid_argument);
  method.kind = BerMethod::Kind::plpoi;
  method.solver.theta = 2.0;
  CHECK_THROWS_AS(ber_montecarlo(method, ChannelKind::awgn, {0.0}, 1, 1, 8),
                  std::invalid_argument);
}
