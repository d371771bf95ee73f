#include "doctest.h"

#include <cmath>
#include <sstream>

#include "evrp/errors.hpp"
#include "evrp/generate.hpp"
#include "evrp/io.hpp"
#include "evrp/model.hpp"
#include "support/builders.hpp"

using namespace evrp;

TEST_CASE("generate respects the OHD ratio exactly") {
  GenParams params;
  params.customer_count = 20;

  SUBCASE("ratio 0 leaves the OHD set empty") {
    params.ohd_ratio = 0.0;
    const Instance instance = generate(params);
    CHECK(instance.customers_ohd.empty());
    CHECK(instance.customers_day_only.size() == 20);
  }

  SUBCASE("ratio 1 empties the day-only set") {
    params.ohd_ratio = 1.0;
    const Instance instance = generate(params);
    CHECK(instance.customers_day_only.empty());
    CHECK(instance.customers_ohd.size() == 20);
  }

  SUBCASE("|OHD| = round(ratio * n)") {
    params.ohd_ratio = 0.2;
    CHECK(generate(params).customers_ohd.size() == 4);
    params.ohd_ratio = 0.33;
    CHECK(generate(params).customers_ohd.size() == 7);  // round(6.6)
  }
}

TEST_CASE("generated night times are day / speed ratio, rounded") {
  GenParams params;
  params.customer_count = 15;
  params.seed = 9;
  params.speed_ratio_night = 1.3;
  const Instance instance = generate(params);
  const auto n = static_cast<LocationId>(instance.location_count());
  for (LocationId i = 0; i < n; ++i) {
    for (LocationId j = 0; j < n; ++j) {
      const Minutes expected =
          std::llround(static_cast<double>(instance.travel_day(i, j)) / 1.3);
      CHECK(instance.travel_night(i, j) == expected);
    }
  }
}

TEST_CASE("generated instances are structurally sound") {
  GenParams params;
  params.customer_count = 30;
  params.ohd_ratio = 0.4;
  params.seed = 4;
  const Instance instance = generate(params);
  CHECK(instance.structure_problems().empty());

  // Euclidean base: triangle inequality holds up to 1 minute of rounding
  // slack per arc.
  const auto n = static_cast<LocationId>(instance.location_count());
  for (LocationId i = 0; i < n; ++i) {
    for (LocationId j = 0; j < n; ++j) {
      for (LocationId k = 0; k < n; ++k) {
        CHECK(instance.travel_day(i, k) <=
              instance.travel_day(i, j) + instance.travel_day(j, k) + 1);
      }
    }
  }
}

TEST_CASE("generation is deterministic per seed") {
  GenParams params;
  params.customer_count = 25;
  params.ohd_ratio = 0.3;
  params.seed = 77;
  const std::string once = instance_to_string(generate(params));
  const std::string twice = instance_to_string(generate(params));
  CHECK(once == twice);
  params.seed = 78;
  CHECK(instance_to_string(generate(params)) != once);
}

TEST_CASE("generate validates its parameters") {
  GenParams params;
  params.ohd_ratio = 1.5;
  CHECK_THROWS_AS(generate(params), std::invalid_argument);
  params.ohd_ratio = 0.5;
  params.volume_min = 0;
  CHECK_THROWS_AS(generate(params), std::invalid_argument);
}

TEST_CASE("instance files round-trip identically") {
  GenParams params;
  params.customer_count = 12;
  params.ohd_ratio = 0.25;
  params.seed = 5;
  const Instance instance = generate(params);

  const std::string text = instance_to_string(instance);
  const Instance reread = instance_from_string(text);
  CHECK(reread == instance);
  CHECK(instance_to_string(reread) == text);
}

TEST_CASE("instance reader rejects broken files with located diagnostics") {
  GenParams params;
  params.customer_count = 4;
  params.seed = 2;
  params.ohd_ratio = 0.5;
  const Instance instance = generate(params);

  SUBCASE("overlapping customer sets name the offending index") {
    Instance broken = instance;
    const LocationId shared = broken.customers_ohd.front();
    broken.customers_day_only.push_back(shared);
    std::sort(broken.customers_day_only.begin(), broken.customers_day_only.end());
    try {
      instance_from_string(instance_to_string(broken));
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(std::to_string(shared)) != std::string::npos);
    }
  }

  SUBCASE("negative travel time") {
    Instance broken = instance;
    broken.travel_day(1, 2) = -5;
    CHECK_THROWS_AS(instance_from_string(instance_to_string(broken)), ParseError);
  }

  SUBCASE("unknown schema version") {
    std::string text = instance_to_string(instance);
    const auto pos = text.find("evrp-instance/1");
    text.replace(pos, 15, "evrp-instance/9");
    CHECK_THROWS_AS(instance_from_string(text), ParseError);
  }

  SUBCASE("malformed JSON") {
    CHECK_THROWS_AS(instance_from_string("{ not json"), ParseError);
  }

  SUBCASE("missing field names the path") {
    std::string text = instance_to_string(instance);
    const auto pos = text.find("\"volume\"");
    text.replace(pos, 8, "\"volumes\"");
    try {
      instance_from_string(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.path() == "volume");
    }
  }
}

TEST_CASE("solution files round-trip and verify their stored objective") {
  GenParams params;
  params.customer_count = 6;
  params.ohd_ratio = 0.5;
  params.seed = 3;
  const Instance instance = generate(params);

  Solution solution;
  solution.trucks.push_back({Engine::electric, {1, 2, 3}, {}, 0});
  solution.trucks.push_back({Engine::conventional, {4, 5, 6}, {}, 0});

  const std::string text = solution_to_string(instance, solution);
  std::istringstream in(text);
  const LoadedSolution loaded = read_solution(in);
  CHECK(loaded.solution == solution);
  CHECK(stored_objective_matches(instance, loaded));
  CHECK(solution_to_string(instance, loaded.solution) == text);

  SUBCASE("tampered objective is flagged") {
    std::string doctored = text;
    const auto pos = doctored.find("\"travel\": ");
    doctored.replace(pos, 12, "\"travel\": 9");
    std::istringstream bad(doctored);
    const LoadedSolution tampered = read_solution(bad);
    CHECK_FALSE(stored_objective_matches(instance, tampered));
  }

  SUBCASE("empty solution round-trips") {
    const Solution empty;
    const std::string empty_text = solution_to_string(instance, empty);
    std::istringstream empty_in(empty_text);
    CHECK(read_solution(empty_in).solution == empty);
  }

  SUBCASE("negative recharge time is rejected") {
    std::string doctored = text;
    const auto pos = doctored.find("\"recharge_time\": 0");
    doctored.replace(pos, 18, "\"recharge_time\": -1");
    std::istringstream bad(doctored);
    CHECK_THROWS_AS(read_solution(bad), ParseError);
  }
}
