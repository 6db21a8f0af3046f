#include <cmath>

#include "doctest.h"
#include "landscape/errors.hpp"
#include "landscape/structure_functions.hpp"

using namespace landscape;

TEST_CASE("closed-form values of the default models") {
  const SrcCorrelator b = default_src();
  const LrcStructure d = default_lrc();
  CHECK(eval_src(b, 0.0) == doctest::Approx(1.0));
  CHECK(eval_src(b, 1.0, 1) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
  CHECK(eval_src(b, 2.0, 4) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(eval_lrc(d, 0.0) == 0.0);
  CHECK(eval_lrc(d, 1.0) == doctest::Approx(1.5 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(eval_lrc(d, 1.0, 1) == doctest::Approx(0.5 + std::exp(-1.0)).epsilon(1e-15));
  CHECK(eval_lrc(d, 1.0, 2) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
  CHECK(eval_lrc(d, 1.0, 3) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  // 1 - e^{-r} for tiny r keeps full relative precision.
  CHECK(eval_lrc(LrcStructure{0.0, {{1.0, 1.0}}}, 1e-12) == doctest::Approx(1e-12).epsilon(1e-12));
}

TEST_CASE("derivatives agree with central differences") {
  const SrcCorrelator b{0.2, {{1.0, 0.7}, {0.3, 2.0}}};
  const LrcStructure d{0.4, {{0.5, 1.5}, {1.0, 0.3}}};
  const double h = 1e-5;
  for (double r : {0.01, 0.5, 3.0})
    for (int k = 1; k <= 4; ++k) {
      CHECK((eval_src(b, r + h, k - 1) - eval_src(b, r - h, k - 1)) / (2 * h) ==
            doctest::Approx(eval_src(b, r, k)).epsilon(1e-7));
      CHECK((eval_lrc(d, r + h, k - 1) - eval_lrc(d, r - h, k - 1)) / (2 * h) ==
            doctest::Approx(eval_lrc(d, r, k)).epsilon(1e-7));
    }
}

TEST_CASE("thresholds and radial scales") {
  CHECK(trivialization_threshold(default_src()) == doctest::Approx(2.0));
  CHECK(trivialization_threshold(default_lrc()) == doctest::Approx(std::sqrt(2.0)));
  // sqrt(4 (1*1 + 0.5*16)) = 6
  CHECK(trivialization_threshold(SrcCorrelator{0.5, {{1.0, 1.0}, {0.5, 2.0}}}) == doctest::Approx(6.0));
  CHECK(radial_scale(Model{default_src()}) == doctest::Approx(2.0));
  CHECK(radial_scale(Model{default_lrc()}) == doctest::Approx(1.5));
}

TEST_CASE("validation names the offending field") {
  auto message = [](const Model& m) {
    try {
      validate(m);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(SrcCorrelator{0.0, {{-1.0, 1.0}}}).find("model.atoms[0].weight") != std::string::npos);
  CHECK(message(SrcCorrelator{0.0, {{1.0, 1.0}, {1.0, 0.0}}}).find("model.atoms[1].frequency") != std::string::npos);
  CHECK(message(SrcCorrelator{-1.0, {}}).find("model.c0") != std::string::npos);
  CHECK(message(LrcStructure{0.0, {}}).find("LRC") != std::string::npos);
  CHECK(message(Model{default_lrc()}).empty());
  CHECK_THROWS_AS(eval_src(default_src(), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_src(default_src(), 1.0, 5), std::invalid_argument);
}

TEST_CASE("alpha and beta against an independent plug-in") {
  const LrcStructure d = default_lrc();
  for (double rho : {0.1, 0.612372, 1.7}) {
    const double r = rho * rho;
    const double D = 0.5 * r + 1.0 - std::exp(-r);
    const double D1 = 0.5 + std::exp(-r);
    const double D2 = -std::exp(-r);
    const double delta = D - D1 * D1 * r / 1.5;
    const AlphaBeta ab = alpha_beta(d, rho);
    CHECK(ab.delta == doctest::Approx(delta).epsilon(1e-12));
    CHECK(ab.alpha == doctest::Approx(2.0 * D2 / std::sqrt(delta)).epsilon(1e-12));
    CHECK(ab.beta == doctest::Approx((D1 - 1.5) / std::sqrt(delta)).epsilon(1e-12));
  }
  // A purely linear structure has delta = 0 at every radius.
  CHECK_THROWS_AS(alpha_beta(LrcStructure{1.0, {}}, 0.5), DegenerateConditioning);
  CHECK_THROWS_AS(alpha_beta(d, 0.0), std::invalid_argument);
}

TEST_CASE("Assumption III on the default structure") {
  const Assumption3Report r = check_assumption3(default_lrc(), 5.0, 500);
  CHECK(r.pass);
  CHECK(r.worst_margin > 0.0);
  CHECK_THROWS_AS(check_assumption3(default_lrc(), 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(check_assumption3(default_lrc(), 1.0, 1), std::invalid_argument);
}

TEST_CASE("model ids are stable and comma free") {
  CHECK(model_id(Model{default_src()}) == "src(c0=0;1@1)");
  CHECK(model_id(Model{default_lrc()}) == "lrc(A=0.5;1@1)");
}
