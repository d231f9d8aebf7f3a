#include <doctest.h>

#include <numeric>

#include "gnsspvt/eval.hpp"

using namespace gnsspvt;

namespace {

std::vector<double> one_to_hundred() {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

}  // namespace

TEST_CASE("percentile, linear interpolation") {
  // h = (n-1) q on the sorted sample.
  const std::vector<double> v{10.0, 20.0, 30.0, 40.0};
  CHECK_EQ(percentile(v, 0.0), 10.0);
  CHECK_EQ(percentile(v, 1.0), 40.0);
  CHECK_EQ(percentile(v, 0.5), 25.0);
  CHECK_EQ(percentile(v, 0.25), 17.5);

  // Order of the input must not matter.
  const std::vector<double> shuffled{40.0, 10.0, 30.0, 20.0};
  CHECK_EQ(percentile(shuffled, 0.5), 25.0);

  const std::vector<double> single{7.0};
  CHECK_EQ(percentile(single, 0.0), 7.0);
  CHECK_EQ(percentile(single, 0.95), 7.0);

  // 1..100: h(0.5) = 49.5 -> 50.5; h(0.95) = 94.05 -> 95.05.
  const auto big = one_to_hundred();
  CHECK_EQ(percentile(big, 0.50), 50.5);
  CHECK_EQ(percentile(big, 0.95), doctest::Approx(95.05).epsilon(1e-12));
}

TEST_CASE("percentile, nearest rank") {
  // rank = ceil(q n), floored at 1.
  const auto big = one_to_hundred();
  CHECK_EQ(percentile(big, 0.50, PercentileMethod::kNearestRank), 50.0);
  CHECK_EQ(percentile(big, 0.95, PercentileMethod::kNearestRank), 95.0);
  CHECK_EQ(percentile(big, 0.0, PercentileMethod::kNearestRank), 1.0);
  CHECK_EQ(percentile(big, 1.0, PercentileMethod::kNearestRank), 100.0);
  CHECK_EQ(percentile(big, 0.001, PercentileMethod::kNearestRank), 1.0);

  const std::vector<double> v{10.0, 20.0, 30.0, 40.0};
  // ceil(0.5 * 4) = 2 -> second smallest.
  CHECK_EQ(percentile(v, 0.5, PercentileMethod::kNearestRank), 20.0);
  // ceil(0.95 * 4) = 4.
  CHECK_EQ(percentile(v, 0.95, PercentileMethod::kNearestRank), 40.0);
}

TEST_CASE("percentile rejects bad inputs") {
  CHECK_THROWS_AS(percentile({}, 0.5), DomainError);
  CHECK_THROWS_AS(percentile({1.0}, -0.1), DomainError);
  CHECK_THROWS_AS(percentile({1.0}, 1.1), DomainError);
}

TEST_CASE("summary score is the P50/P95 midpoint") {
  const auto big = one_to_hundred();
  // Linear: (50.5 + 95.05) / 2.
  CHECK_EQ(horizontal_score(big), doctest::Approx(72.775).epsilon(1e-12));
  // Nearest rank: (50 + 95) / 2.
  CHECK_EQ(horizontal_score(big, PercentileMethod::kNearestRank),
           72.5);

  const std::vector<double> flat(10, 3.0);
  CHECK_EQ(horizontal_score(flat), 3.0);

  CHECK_THROWS_AS(horizontal_score({}), DomainError);
}

TEST_CASE("ecdf knots") {
  const std::vector<double> v{3.0, 1.0, 2.0, 2.0};
  const auto knots = ecdf(v);
  REQUIRE_EQ(knots.size(), 4);
  CHECK_EQ(knots[0], std::pair{1.0, 0.25});
  CHECK_EQ(knots[1], std::pair{2.0, 0.5});
  CHECK_EQ(knots[2], std::pair{2.0, 0.75});  // duplicates keep their own step
  CHECK_EQ(knots[3], std::pair{3.0, 1.0});
  CHECK(ecdf({}).empty());
}

TEST_CASE("truth matching interpolates between brackets") {
  const std::vector<GroundTruthPoint> truth{
      {1000, 10.0, 100.0, 50.0},
      {3000, 12.0, 102.0, 70.0},
      {4000, 12.0, 102.0, 70.0},
  };

  SUBCASE("midpoint") {
    const std::vector<TimedGeodetic> sols{{2000, {0.0, 0.0, 0.0}}};
    std::size_t dropped = 99;
    const auto matched = match_truth(sols, truth, &dropped);
    REQUIRE_EQ(matched.size(), 1);
    CHECK_EQ(dropped, 0);
    CHECK_EQ(matched[0].second.lat_deg, 11.0);
    CHECK_EQ(matched[0].second.lon_deg, 101.0);
    CHECK_EQ(matched[0].second.alt_m, 60.0);
  }

  SUBCASE("exact hits take the sample directly") {
    const std::vector<TimedGeodetic> sols{{3000, {0.0, 0.0, 0.0}},
                                          {1000, {0.0, 0.0, 0.0}}};
    const auto matched = match_truth(sols, truth);
    REQUIRE_EQ(matched.size(), 2);
    CHECK_EQ(matched[0].second.lat_deg, 12.0);
    CHECK_EQ(matched[1].second.lat_deg, 10.0);
  }

  SUBCASE("asymmetric interpolation factor") {
    const std::vector<TimedGeodetic> sols{{1500, {0.0, 0.0, 0.0}}};
    const auto matched = match_truth(sols, truth);
    CHECK_EQ(matched[0].second.lat_deg, 10.5);
  }

  SUBCASE("solutions outside the span are dropped and counted") {
    const std::vector<TimedGeodetic> sols{{500, {}}, {2000, {}}, {4500, {}}};
    std::size_t dropped = 0;
    const auto matched = match_truth(sols, truth, &dropped);
    CHECK_EQ(matched.size(), 1);
    CHECK_EQ(dropped, 2);
  }

  SUBCASE("no overlap at all raises") {
    const std::vector<TimedGeodetic> sols{{100, {}}, {200, {}}};
    CHECK_THROWS_AS(match_truth(sols, truth), NoOverlapError);
  }

  SUBCASE("unsorted truth raises") {
    std::vector<GroundTruthPoint> bad = truth;
    std::swap(bad[0], bad[1]);
    const std::vector<TimedGeodetic> sols{{2000, {}}};
    CHECK_THROWS_AS(match_truth(sols, bad), DomainError);
  }

  SUBCASE("empty truth raises") {
    const std::vector<TimedGeodetic> sols{{2000, {}}};
    CHECK_THROWS_AS(match_truth(sols, std::vector<GroundTruthPoint>{}), DomainError);
  }
}

TEST_CASE("error records decompose into ENU + geodesic horizontal") {
  const GeodeticPos truth{1.3521, 103.8198, 50.0};

  // Estimate displaced a known ENU amount from truth.
  const Eigen::Vector3d truth_ecef = geodetic_to_ecef(truth);
  const Eigen::Matrix3d r = enu_rotation(truth);
  const Eigen::Vector3d displaced =
      truth_ecef + r.transpose() * Eigen::Vector3d(3.0, 4.0, -2.0);
  const GeodeticPos est = ecef_to_geodetic(displaced);

  const ErrorRecord rec = make_error_record({7000, est}, truth, "wls");
  CHECK_EQ(rec.utc_millis, 7000);
  CHECK_EQ(rec.method, "wls");
  CHECK_EQ(rec.east_m, doctest::Approx(3.0).epsilon(1e-6));
  CHECK_EQ(rec.north_m, doctest::Approx(4.0).epsilon(1e-6));
  CHECK_EQ(rec.up_m, doctest::Approx(-2.0).epsilon(1e-6));
  CHECK_EQ(rec.vertical_m, doctest::Approx(2.0).epsilon(1e-6));
  // Horizontal geodesic distance ~ the tangent-plane norm at this scale.
  CHECK_EQ(rec.horizontal_m, doctest::Approx(5.0).epsilon(1e-4));

  // A pure vertical offset leaves the horizontal error at zero.
  const GeodeticPos above{truth.lat_deg, truth.lon_deg, truth.alt_m + 10.0};
  const ErrorRecord vert = make_error_record({7000, above}, truth, "wls");
  CHECK(vert.horizontal_m < 1e-9);
  CHECK_EQ(vert.vertical_m, doctest::Approx(10.0).epsilon(1e-9));
}
