#include <gtest/gtest.h>

#include <random>

#include "fjs/instance.hpp"
#include "support/testkit.hpp"

namespace {

const char* kFig1Text = R"(# two machines, full routing flexibility
5 2 1
2 1 1 2 1
2 1 1 2 1
2 1 1 2 1
2 1 10 2 10
2 1 1 2 1
3
1 2
2 3
4 5
)";

TEST(Instance, ParsesFigureOne) {
  const auto inst = fjs::parse_instance(kFig1Text);
  EXPECT_EQ(inst.num_operations, 5);
  EXPECT_EQ(inst.num_machines, 2);
  EXPECT_EQ(inst.precedence_arcs, (std::vector<fjs::Arc>{{1, 2}, {2, 3}, {4, 5}}));
  for (int i = 1; i <= 5; ++i)
    for (int k = 1; k <= 2; ++k) EXPECT_EQ(inst.processing_time(i, k), i == 4 ? 10 : 1);
  EXPECT_EQ(inst, testkit::fig1_instance());
  EXPECT_TRUE(fjs::validate_instance(inst).empty());
}

TEST(Instance, SingleOperation) {
  const auto inst = fjs::parse_instance("1 1 0.2\n1 1 3\n0\n");
  EXPECT_EQ(inst.num_operations, 1);
  EXPECT_EQ(inst.processing_time(1, 1), 3);
  EXPECT_TRUE(inst.precedence_arcs.empty());
}

TEST(Instance, TwoCycleIsRejected) {
  EXPECT_THROW(fjs::parse_instance("2 1 1\n1 1 1\n1 1 1\n2\n1 2\n2 1\n"), fjs::CycleError);
}

TEST(Instance, DuplicateArcsCollapse) {
  const auto inst = fjs::parse_instance("2 1 1\n1 1 1\n1 1 1\n3\n1 2\n1 2\n1 2\n");
  EXPECT_EQ(inst.precedence_arcs.size(), 1u);
}

TEST(Instance, AlphaOverrideAndMissingAlpha) {
  EXPECT_THROW(fjs::parse_instance("1 1\n1 1 3\n0\n"), fjs::ParseError);
  EXPECT_DOUBLE_EQ(fjs::parse_instance("1 1\n1 1 3\n0\n", 0.3).learning_rate, 0.3);
  EXPECT_DOUBLE_EQ(fjs::parse_instance("1 1 0.1\n1 1 3\n0\n", 0.2).learning_rate, 0.2);
}

TEST(Instance, ErrorsCarryLineNumbers) {
  struct Case {
    const char* text;
    int line;
  };
  const Case cases[] = {
      {"2 1 1\n1 1 1\n0 \n0\n", 3},              // empty eligibility
      {"1 2 1\n1 3 4\n0\n", 2},                  // unknown machine
      {"1 1 1\n1 1 x\n0\n", 2},                  // bad token
      {"1 1 1\n2 1 4\n0\n", 2},                  // too few pairs
      {"1 1 0\n1 1 1\n0\n", 1},                  // alpha = 0
      {"1 1 1\n1 1 1\n1\n1 2\n", 4},             // unknown arc endpoint
      {"1 1 1\n1 1 1\n0\nextra\n", 4},           // trailing content
      {"2 1 1\n1 1 1\n", 3},                     // truncated
  };
  for (const auto& c : cases) {
    try {
      fjs::parse_instance(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const fjs::ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text << " -> " << e.what();
    }
  }
}

TEST(Instance, ValidateReportsEmptyEligibility) {
  auto inst = testkit::fig1_instance();
  inst.eligible[1].clear();
  inst.std_time[1] = {fjs::kIneligible, fjs::kIneligible};
  const auto v = fjs::validate_instance(inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].operation, 2);
}

TEST(Instance, ValidateReportsZeroRate) {
  auto inst = testkit::fig1_instance();
  inst.learning_rate = 0.0;
  const auto v = fjs::validate_instance(inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("learning_rate"), std::string::npos);
}

TEST(Instance, ValidateReportsTimeOnIneligibleMachine) {
  auto inst = testkit::fig1_instance();
  inst.eligible[0] = {1};
  EXPECT_EQ(fjs::validate_instance(inst).size(), 1u);
}

TEST(Instance, ValidateReportsCycle) {
  auto inst = testkit::fig1_instance();
  inst.add_arc(3, 1);
  EXPECT_EQ(fjs::validate_instance(inst).size(), 1u);
}

TEST(Instance, RoundTripRandom) {
  std::mt19937_64 rng(11);
  testkit::InstanceShape shape;
  shape.max_ops = 15;
  shape.max_machines = 5;
  shape.alphas = {0.1, 0.2, 0.3, 0.123456789, 1.0 / 3.0};
  shape.zero_time_probability = 0.1;
  for (int t = 0; t < 300; ++t) {
    const auto inst = testkit::random_instance(rng, shape);
    ASSERT_TRUE(fjs::validate_instance(inst).empty());
    EXPECT_EQ(fjs::parse_instance(fjs::write_instance(inst)), inst);
  }
}

TEST(Classical, TwoJobsTwoOps) {
  const auto inst = fjs::import_classical_fjs("2 2 1\n2 1 1 3 2 2 1 2 4\n2 1 2 2 2 1 5 2 1\n", 0.2);
  EXPECT_EQ(inst.num_operations, 4);
  EXPECT_EQ(inst.precedence_arcs, (std::vector<fjs::Arc>{{1, 2}, {3, 4}}));
  EXPECT_EQ(inst.processing_time(1, 1), 3);
  EXPECT_EQ(inst.processing_time(3, 2), 2);
  EXPECT_EQ(inst.processing_time(2, 2), 1);  // duplicate machine keeps the shorter time
  EXPECT_EQ(inst.machines_for(2), (std::vector<int>{2}));
  EXPECT_FALSE(inst.can_process(3, 1));
  EXPECT_EQ(inst.machines_for(4), (std::vector<int>{1, 2}));
  EXPECT_TRUE(fjs::validate_instance(inst).empty());
}

TEST(Classical, SingleOperation) {
  const auto inst = fjs::import_classical_fjs("1 1\n1 1 1 7\n", 0.1);
  EXPECT_EQ(inst.num_operations, 1);
  EXPECT_TRUE(inst.precedence_arcs.empty());
}

TEST(Classical, Errors) {
  EXPECT_THROW(fjs::import_classical_fjs("x 2\n", 0.1), fjs::ParseError);
  EXPECT_THROW(fjs::import_classical_fjs("1 2\n1 0\n", 0.1), fjs::ParseError);
  EXPECT_THROW(fjs::import_classical_fjs("1 2\n1 1 3 4\n", 0.1), fjs::ParseError);
}

TEST(Classical, RandomImportsValidate) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const int jobs = 1 + static_cast<int>(rng() % 4), m = 1 + static_cast<int>(rng() % 4);
    std::string text = std::to_string(jobs) + " " + std::to_string(m) + " 2\n";
    for (int j = 0; j < jobs; ++j) {
      const int ops = 1 + static_cast<int>(rng() % 4);
      text += std::to_string(ops);
      for (int o = 0; o < ops; ++o) {
        const int cnt = 1 + static_cast<int>(rng() % m);
        text += " " + std::to_string(cnt);
        for (int a = 0; a < cnt; ++a) text += " " + std::to_string(1 + rng() % m) + " " + std::to_string(1 + rng() % 9);
      }
      text += "\n";
    }
    const auto inst = fjs::import_classical_fjs(text, 0.3);
    EXPECT_TRUE(fjs::validate_instance(inst).empty()) << text;
  }
}

}  // namespace
