#include <doctest.h>

#include "helpers.hpp"
#include "netglm/assessment.hpp"
#include "netglm/describe.hpp"
#include "netglm/error.hpp"
#include "netglm/exact_oracle.hpp"

using namespace netglm;

namespace {

SamplerConfig quick(int draws, std::uint64_t seed = 1) {
  SamplerConfig c;
  c.n_burn_in = 5;
  c.n_simulation = draws;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("assessment") {
  TEST_CASE("stored samples are reused without new transitions") {
    testing::RandomSpec spec;
    spec.n = 10;
    PopulationData d = testing::random_population(spec, 2);
    Model m = Model::bind(parse_formula("edges + attribute_y + spillover_yy"), d);
    Eigen::VectorXd theta = Eigen::VectorXd::Constant(3, -0.2);
    SimulationResult sim = simulate(m, theta, d, quick(20));
    AssessmentReport reused = assess(m, theta, d, {"degree"}, &sim);
    CHECK(reused.transitions == 0);
    AssessmentReport fresh = assess(m, theta, d, {"degree"}, nullptr, quick(20));
    CHECK(fresh.transitions > 0);
    CHECK_THROWS_AS(assess(m, theta, d, {"degree", "nosuch"}, &sim), ValidationError);
  }

  TEST_CASE("curves follow request order with aligned columns") {
    testing::RandomSpec spec;
    spec.n = 9;
    spec.y_family = Family::normal;
    PopulationData d = testing::random_population(spec, 6);
    Model m = Model::bind(parse_formula("edges + attribute_y + mutual"), d);
    Eigen::VectorXd theta(3);
    theta << -0.5, 0.1, 0.4;
    SimulationResult sim = simulate(m, theta, d, quick(15));
    AssessmentReport r = assess(m, theta, d, assessment_statistics(), &sim);
    std::vector<std::string> names;
    for (const Curve& c : r.curves) {
      names.push_back(c.name);
      CHECK(c.observed.size() == c.bins.size());
      CHECK(c.sim_min.size() == c.bins.size());
      CHECK(c.sim_max.size() == c.bins.size());
      CHECK(std::is_sorted(c.bins.begin(), c.bins.end()));
      for (std::size_t k = 0; k < c.bins.size(); ++k) {
        CHECK(c.sim_min[k] <= c.sim_median[k]);
        CHECK(c.sim_median[k] <= c.sim_max[k]);
      }
    }
    CHECK(names == std::vector<std::string>{"degree_out", "degree_in", "spillover_degree_out", "spillover_degree_in",
                                            "geodesic", "dyadwise_shared_partner", "edgewise_shared_partner",
                                            "x_distribution", "y_distribution"});
    CHECK(curve_csv(r.curves[0]).rfind("bin,observed,sim_min,sim_median,sim_max\n", 0) == 0);
  }

  TEST_CASE("observed data as every draw gives a degenerate envelope") {
    testing::RandomSpec spec;
    spec.n = 8;
    PopulationData d = testing::random_population(spec, 3);
    Model m = Model::bind(parse_formula("edges"), d);
    SimulationResult same;
    same.states.assign(5, d.state());
    AssessmentReport r = assess(m, Eigen::VectorXd::Zero(1), d, {"geodesic", "edgewise_shared_partner"}, &same);
    for (const Curve& c : r.curves)
      for (std::size_t k = 0; k < c.bins.size(); ++k) {
        CHECK(c.sim_min[k] == c.observed[k]);
        CHECK(c.sim_max[k] == c.observed[k]);
      }
  }

  TEST_CASE("envelope covers the exact expected degree counts") {
    RawPopulation raw;
    raw.unit_ids = {"a", "b", "c"};
    raw.x = {1, 0, 1};
    raw.y = {0, 1, 0};
    BuildFlags f;
    f.fix_x = true;
    PopulationData d = build_population(raw, f);
    Model m = Model::bind(parse_formula("edges + mutual + attribute_y"), d);
    Eigen::VectorXd theta(3);
    theta << -0.3, 0.8, 0.2;
    ExactDistribution dist = enumerate(m, d, theta);
    std::map<std::int64_t, double> expected;
    for (std::uint64_t s = 0; s < dist.size(); ++s)
      for (auto [k, c] : degree_distribution(d, dist.state_at(s)).out) expected[k] += dist.prob[s] * c;
    AssessmentReport r = assess(m, theta, d, {"degree"}, nullptr, quick(10000, 5));
    const Curve& out = r.curves[0];
    REQUIRE(out.name == "degree_out");
    for (std::size_t k = 0; k < out.bins.size(); ++k) {
      double e = expected[out.bins[k]];
      CHECK(out.sim_min[k] <= e);
      CHECK(e <= out.sim_max[k]);
    }
  }

  TEST_CASE("conditional predictions") {
    RawPopulation raw;
    raw.unit_ids = {"a", "b", "c"};
    raw.x = {1, 0, 1};
    raw.y = {0, 1, 0};
    raw.edges = {{0, 1}};
    BuildFlags f;
    f.fix_x = true;
    PopulationData d = build_population(raw, f);
    Model m = Model::bind(parse_formula("attribute_y + edges"), d);
    Eigen::VectorXd theta(2);
    theta << 0.0, 1.0;
    Predictions p = predict(m, theta, d, PredictionVariant::conditional, nullptr);
    CHECK(p.x.empty());
    REQUIRE(p.y.size() == 3);
    for (const auto& u : p.y) CHECK(u.prediction == 0.5);
    REQUIRE(p.z.size() == 6);
    for (const auto& e : p.z) CHECK(e.prediction == doctest::Approx(0.7310585786));
    CHECK(p.y[1].target == 1.0);
    CHECK(unit_predictions_csv(p.y, d) == "id,target,prediction\na,0,0.5\nb,1,0.5\nc,0,0.5\n");
    CHECK(dyad_predictions_csv(p.z, d).rfind("src,dst,target,prediction\na,b,1,", 0) == 0);
  }

  TEST_CASE("marginal predictions") {
    RawPopulation raw;
    raw.unit_ids = {"a", "b"};
    raw.x = {1, 0};
    raw.y = {0, 1};
    BuildFlags f;
    f.fix_x = true;
    f.directed = false;
    PopulationData d = build_population(raw, f);
    Model m = Model::bind(parse_formula("edges"), d);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(predict(m, theta, d, PredictionVariant::marginal, nullptr), ValidationError);
    SamplerConfig c = quick(10000, 7);
    c.z_proposals_per_draw = 1;
    c.y_proposals_per_draw = 2;
    SimulationResult sim = simulate(m, theta, d, c);
    Predictions p = predict(m, theta, d, PredictionVariant::marginal, &sim);
    REQUIRE(p.z.size() == 1);
    CHECK(std::abs(p.z[0].prediction - 0.5) < 0.01);
    REQUIRE(p.x.size() == 2);
    CHECK(p.x[0].prediction == 1.0);
    CHECK(p.x[1].prediction == 0.0);
    for (const auto& u : p.y) CHECK((u.prediction >= 0.0 && u.prediction <= 1.0));
  }
}
