#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "orthokin/optimize.hpp"

using namespace orthokin;
using Eigen::Vector3d;

namespace {

const DeviceGeometry kTemplate;  // strokes are outputs; defaults as template

void check_certificate(const SizingReport& r, double edge, double psi) {
  CHECK(r.target_edge == edge);
  CHECK(r.psi == psi);
  CHECK(r.leg_length > 0.0);
  CHECK(r.cube.edge == edge);
  CHECK(r.pass_at_solution);
  CHECK(r.fail_below);
  CHECK(r.lower_test ==
        Catch::Approx(r.leg_length * (1.0 - 10.0 * r.tolerance))
            .epsilon(1e-12));
  // required strokes cover the carriage excursions over the cube and are
  // consistent as an interval
  CHECK(r.stroke_min_required[0] < r.stroke_max_required[0]);
  CHECK(r.geometry.leg_length == r.leg_length);
  CHECK(r.geometry.stroke_min == r.stroke_min_required);
  CHECK(r.geometry.stroke_max == r.stroke_max_required);
  // the conditioning band [1/psi, psi] caps the ratio at psi^2
  CHECK(r.worst_kappa >= 1.0);
  CHECK(r.worst_kappa <= psi * psi * (1.0 + 1e-6));
}

}  // namespace

TEST_CASE("sizing certificates", "[optimize]") {
  const SizingReport r1 = size_leg_length(1.0, 2.0, kTemplate);
  check_certificate(r1, 1.0, 2.0);

  const SizingReport r2 = size_leg_length(0.5, 1.5, kTemplate);
  check_certificate(r2, 0.5, 1.5);

  // a tighter band needs more leg per unit of cube edge
  CHECK(r2.leg_length / 0.5 > r1.leg_length / 1.0);
}

TEST_CASE("sizing scales linearly with the target edge", "[optimize]") {
  const SizingReport a = size_leg_length(0.8, 2.0, kTemplate);
  const SizingReport b = size_leg_length(1.6, 2.0, kTemplate);
  CHECK(std::abs(b.leg_length - 2.0 * a.leg_length) <=
        1e-5 * b.leg_length);
}

TEST_CASE("sizing is monotone in the target edge", "[optimize]") {
  const SizingReport small = size_leg_length(0.5, 2.0, kTemplate, 1e-5);
  const SizingReport large = size_leg_length(1.0, 2.0, kTemplate, 1e-5);
  CHECK(small.leg_length <= large.leg_length * (1.0 + 1e-4));
}

TEST_CASE("sizing with a tiny target still certifies", "[optimize]") {
  const SizingReport r = size_leg_length(1e-3, 1.05, kTemplate, 1e-5);
  CHECK(r.pass_at_solution);
  // with a barely-open band the cube hugs the isotropic point
  CHECK((r.cube.center.cwiseAbs().maxCoeff()) <= 0.5 * r.leg_length);
}

TEST_CASE("sizing rejects bad inputs", "[optimize]") {
  SECTION("psi below one") {
    try {
      size_leg_length(1.0, 0.9, kTemplate);
      FAIL("expected BadBound");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadBound);
    }
  }
  SECTION("psi of exactly one leaves no band") {
    try {
      size_leg_length(1.0, 1.0, kTemplate);
      FAIL("expected Unachievable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Unachievable);
    }
  }
  SECTION("nonpositive edge") {
    CHECK_THROWS_AS(size_leg_length(0.0, 2.0, kTemplate), Error);
    CHECK_THROWS_AS(size_leg_length(-1.0, 2.0, kTemplate), Error);
  }
  SECTION("tolerance domain") {
    CHECK_THROWS_AS(size_leg_length(1.0, 2.0, kTemplate, 0.0), Error);
    CHECK_THROWS_AS(size_leg_length(1.0, 2.0, kTemplate, 0.5), Error);
  }
}

TEST_CASE("sizing is deterministic", "[optimize]") {
  const SizingReport a = size_leg_length(1.0, 2.0, kTemplate);
  const SizingReport b = size_leg_length(1.0, 2.0, kTemplate);
  CHECK(a.leg_length == b.leg_length);
  CHECK(a.cube.center == b.cube.center);
  CHECK(a.worst_kappa == b.worst_kappa);
}

TEST_CASE("sweep report", "[optimize]") {
  const SizingReport sized = size_leg_length(1.0, 2.0, kTemplate, 1e-5);
  const std::vector<double> lengths{0.5 * sized.leg_length, sized.leg_length,
                                    2.0 * sized.leg_length};
  const std::vector<SweepRow> rows = sweep_report(kTemplate, lengths, 1.0, 2.0);
  REQUIRE(rows.size() == 3u);

  SECTION("rows echo their inputs and succeed") {
    for (size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].leg_length == lengths[i]);
      CHECK(rows[i].status == "ok");
      CHECK(std::isfinite(rows[i].achieved_edge));
      CHECK(rows[i].worst_kappa >= 1.0);
    }
  }
  SECTION("consistency with the sizing answer") {
    CHECK_FALSE(rows[0].pass);
    CHECK(rows[1].pass);
    CHECK(rows[2].pass);
  }
  SECTION("achieved edge is nondecreasing in the leg length") {
    CHECK(rows[0].achieved_edge <= rows[1].achieved_edge + 1e-9);
    CHECK(rows[1].achieved_edge <= rows[2].achieved_edge + 1e-9);
  }
  SECTION("achieved edge tracks the leg length linearly") {
    CHECK(std::abs(rows[2].achieved_edge - 2.0 * rows[1].achieved_edge) <=
          1e-3 * rows[2].achieved_edge);
  }
}

TEST_CASE("sweep rejects bad global inputs but not bad rows", "[optimize]") {
  SECTION("empty length list") {
    try {
      sweep_report(kTemplate, {}, 1.0, 2.0);
      FAIL("expected EmptyInput");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyInput);
    }
  }
  SECTION("bad target or psi") {
    CHECK_THROWS_AS(sweep_report(kTemplate, {1.0}, 0.0, 2.0), Error);
    CHECK_THROWS_AS(sweep_report(kTemplate, {1.0}, 1.0, 0.5), Error);
  }
  SECTION("a nonpositive length fails only its own row") {
    const std::vector<SweepRow> rows =
        sweep_report(kTemplate, {-1.0, 2.0}, 1.0, 2.0);
    REQUIRE(rows.size() == 2u);
    CHECK(rows[0].status == "NonPositiveLength");
    CHECK_FALSE(rows[0].pass);
    CHECK(std::isnan(rows[0].achieved_edge));
    CHECK(rows[1].status == "ok");
    CHECK(rows[1].pass);
  }
}
