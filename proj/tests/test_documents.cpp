#include <gtest/gtest.h>

#include <random>

#include "examsched/documents.hpp"
#include "support/oracle.hpp"

using namespace examsched;

TEST(Documents, InstanceRoundTrip) {
  std::vector<Instance> cases = {oracle::load_fixture("tiny"), oracle::load_fixture("singleton")};
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) cases.push_back(oracle::random_tiny_instance(rng));
  for (const auto& inst : cases) {
    Json doc = instance_to_json(inst);
    Instance back = instance_from_json(parse_document(dump(doc), "instance"));
    ASSERT_EQ(dump(instance_to_json(back)), dump(doc));
    ASSERT_EQ(instance_digest(back), instance_digest(inst));
    ASSERT_EQ(back.capacity, inst.capacity);
    Schedule s = oracle::random_schedule(inst, rng, false);
    ASSERT_EQ(evaluate_schedule(back, s, inst.weights).weighted_objective,
              evaluate_schedule(inst, s, inst.weights).weighted_objective);
  }
}

TEST(Documents, DigestTracksContent) {
  Instance a = oracle::load_fixture("tiny");
  Instance b = a;
  b.forbidden(0, 0) = !b.forbidden(0, 0);
  EXPECT_NE(instance_digest(a), instance_digest(b));
}

TEST(Documents, WeightsAndCatalog) {
  Weights w{1, 2, 3, 4, 5, 6, 7};
  EXPECT_EQ(weights_from_json(weights_to_json(w)), w);
  auto cat = default_catalog();
  auto back = catalog_from_json(parse_document(dump(catalog_to_json(cat)), "weight-catalog"));
  ASSERT_EQ(back.size(), cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    EXPECT_EQ(back[i].name, cat[i].name);
    EXPECT_EQ(back[i].weights, cat[i].weights);
  }
  Json bad = weights_to_json(w);
  bad["b2b"] = -1;
  EXPECT_THROW(weights_from_json(bad), Error);
}

TEST(Documents, PeriodRoundTrip) {
  for (int d = 1; d <= 7; ++d) {
    auto c = default_period_config(d);
    EXPECT_EQ(period_from_json(period_to_json(c)), c);
  }
}

TEST(Documents, ScheduleRoundTripAndCsv) {
  Instance inst = oracle::load_fixture("tiny");
  std::mt19937_64 rng(3);
  Schedule s = oracle::random_schedule(inst, rng, true);
  Json doc = schedule_to_json(inst, s, "survey");
  EXPECT_EQ(doc["weight_set"], "survey");
  EXPECT_EQ(schedule_from_json(inst, parse_document(dump(doc), "schedule")), s);
  // Slot references alone are enough.
  for (auto& row : doc["assignments"]) row.erase("slot");
  EXPECT_EQ(schedule_from_json(inst, doc), s);
  doc["assignments"][0]["group"] = "NOPE";
  EXPECT_THROW(schedule_from_json(inst, doc), Error);

  std::string csv = schedule_csv(inst, s);
  EXPECT_EQ(csv.rfind("group,sections,slot,day,time\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), inst.n_groups() + 1);
}

TEST(Documents, ReportHasEightRows) {
  Instance inst = oracle::load_fixture("tiny");
  std::mt19937_64 rng(4);
  auto r = evaluate_schedule(inst, oracle::random_schedule(inst, rng, true), inst.weights);
  Json doc = report_to_json(r);
  ASSERT_EQ(doc["rows"].size(), 8u);
  EXPECT_EQ(doc["rows"][0]["key"], metric_key(Metric::kStudentOverlap));
  EXPECT_EQ(doc["weighted_objective"], r.weighted_objective);
}

TEST(Documents, RejectsWrongKind) {
  EXPECT_THROW(parse_document("{", "schedule"), Error);
  EXPECT_THROW(parse_document(R"({"kind":"report","schema_version":1})", "schedule"), Error);
  EXPECT_THROW(parse_document(R"({"kind":"schedule","schema_version":99})", "schedule"), Error);
  EXPECT_NO_THROW(parse_document(R"({"kind":"schedule","schema_version":1})", "schedule"));
}

TEST(Documents, DumpIsStable) {
  Json a = Json::parse(R"({"b":1,"a":[1,2]})");
  Json b = Json::parse(R"({"a":[1,2],"b":1})");
  EXPECT_EQ(dump(a), dump(b));
  EXPECT_EQ(dump(a).back(), '\n');
}
