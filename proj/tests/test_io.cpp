#include <sstream>

#include "doctest.h"
#include "dyncap/errors.hpp"
#include "dyncap/io.hpp"

using namespace dyncap;

TEST_CASE("map specs") {
  const auto a = map_from_json(json::parse(R"({"num":["0","0","1"],"den":["1"]})"));
  CHECK(a.resultant() == Rational(1));
  const auto b = map_from_json(json::parse(R"({"F1":["2","0","0"],"F2":["0","0","1"],"d":2})"));
  CHECK(b.resultant() == Rational(4));
  CHECK(map_from_json(map_to_json(b)) == b);
  CHECK(map_from_json(json::parse(R"({"F1":[1,0,0],"F2":["0","0","1/3"]})")).f2()[2] == Rational::parse("1/3"));
  CHECK(*map_alias("z2") == a);
  CHECK(map_alias("z2p1")->f2()[0] == Rational(1));
  CHECK(map_alias("lattes-demo")->degree() == 4);
  CHECK_FALSE(map_alias("z3"));
  CHECK(parse_map_argument(R"({"num":["1","0","1"],"den":["1"]})") == *map_alias("z2p1"));
  CHECK_THROWS_AS((void)parse_map_argument("{not json"), InvalidInput);
  CHECK_THROWS_AS((void)parse_map_argument("/nonexistent/map.json"), InvalidInput);
  CHECK_THROWS_AS((void)map_from_json(json::parse(R"({"F1":["1","0"],"F2":["0","0","1"]})")), InvalidInput);
  CHECK_THROWS_AS((void)map_from_json(json::parse(R"({"F1":["1","0","0"],"F2":["1","0","0"]})")), InvalidInput);
  CHECK_THROWS_AS((void)map_from_json(json::parse(R"({"num":[true],"den":["1"]})")), InvalidInput);
  CHECK_THROWS_AS((void)map_from_json(json::parse(R"([1,2])")), InvalidInput);
}

TEST_CASE("places") {
  CHECK(place_to_json(Place::archimedean()) == "arch");
  CHECK(place_from_json(json::parse(R"({"p": 5})")) == Place::finite(5));
  CHECK(place_from_json(place_to_json(Place::finite(7))) == Place::finite(7));
  CHECK(place_from_json(json("arch")).is_archimedean());
  CHECK_THROWS_AS((void)place_from_json(json::parse("3")), InvalidInput);
}

TEST_CASE("configuration round trip") {
  const auto F = *map_alias("z2");
  const auto r = tdiam_estimate(F, Place::archimedean(), 6, Strategy::RootsOfUnity);
  const auto j = configuration_to_json(r);
  CHECK(j["points"][0].size() == 4);
  const auto back = configuration_from_json(json::parse(j.dump()));
  CHECK(back.n == r.n);
  CHECK(back.d0n == r.d0n);
  CHECK(back.target == r.target);
  CHECK(back.points == r.points);
  CHECK(back.strategy == r.strategy);
  CHECK_THROWS_AS((void)configuration_from_json(json::parse(R"({"n":2})")), InvalidInput);
}

TEST_CASE("experiment records") {
  const auto b = bilu_record(8, false, bilu_experiment(8, false, 4));
  const auto j = json::parse(record_to_json(b).dump());
  const auto back = record_from_json(j);
  CHECK(back.experiment == "bilu");
  CHECK(back.table.size() == 4);
  CHECK(back.params["n"] == 8);
  std::ostringstream csv;
  write_record_csv(csv, back);
  CHECK(csv.str().rfind("abs,im,k,re\n", 0) == 0);
  CHECK_THROWS_AS((void)record_from_json(json::parse(R"({"experiment":"x"})")), InvalidInput);

  const auto t = tdiam_monotonicity_trace(*map_alias("z2"), Place::archimedean(), 4, Strategy::RootsOfUnity);
  const auto rec = record_from_json(json::parse(record_to_json(tdiam_record(t)).dump()));
  CHECK(configuration_from_json(rec.table[2]).n == 4);
}

TEST_CASE("number formatting") {
  CHECK(format_double(std::log(2.0)) == "0.693147180559945");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-HUGE_VAL) == "-inf");
}
