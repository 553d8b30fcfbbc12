// Copyright 2026 The rsmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsm/campaign.hpp"
#include "rsm/desirability.hpp"

namespace fs = std::filesystem;
using rsm::CampaignConfig;
using rsm::CampaignOptions;
using rsm::CampaignState;
using rsm::Json;

namespace {

fs::path scratch(const std::string& tag) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path p = fs::temp_directory_path() /
               ("rsm_campaign_" + std::to_string(::getpid()) + "_" + info->name() + "_" + tag);
  fs::remove_all(p);
  return p;
}

CampaignConfig pinned_config() { return CampaignConfig::load(fs::path(RSM_SOURCE_DIR) / "configs" / "housing.json"); }

CampaignState run(const CampaignConfig& cfg, const fs::path& dir, bool resume = false,
                  std::optional<int> stop = std::nullopt) {
  auto ev = rsm::make_evaluator(cfg, dir);
  CampaignOptions opt;
  opt.workdir = dir;
  opt.resume = resume;
  opt.stop_after_stages = stop;
  return rsm::run_campaign(cfg, *ev, opt);
}

// Throws on the n-th evaluate call (1-based), forwards otherwise.
class FlakyEvaluator final : public rsm::Evaluator {
 public:
  FlakyEvaluator(rsm::Evaluator& inner, int fail_on) : inner_(inner), fail_on_(fail_on) {}
  rsm::EvaluationResult evaluate(const rsm::EvaluationRequest& r) override {
    if (++calls_ == fail_on_) throw rsm::Error("simulator crashed");
    return inner_.evaluate(r);
  }
  std::string name() const override { return "flaky"; }

 private:
  rsm::Evaluator& inner_;
  int fail_on_;
  int calls_ = 0;
};

// Natural values keyed by factor name.
std::map<std::string, double> surrogate_optimum() {
  const auto c = rsm::SurrogateSpec::housing_center();
  return {{"overhang", c[0]}, {"wwr_west", c[1]}, {"wwr_south", c[2]}};
}

double coded_distance(const Json& factors, const std::map<std::string, double>& a,
                      const std::map<std::string, double>& b) {
  double s = 0.0;
  for (const auto& f : factors) {
    const std::string n = f.at("name");
    const double half = 0.5 * (f.at("high").get<double>() - f.at("low").get<double>());
    const double d = (a.at(n) - b.at(n)) / half;
    s += d * d;
  }
  return std::sqrt(s);
}

const Json& stage_of_kind(const CampaignState& st, const std::string& kind, int nth = 0) {
  for (const auto& s : st.stages())
    if (s.at("kind") == kind && nth-- == 0) return s;
  throw std::runtime_error("no stage " + kind);
}

double d_at(const std::map<std::string, double>& x, double upper, double lower) {
  return oracle::housing_d(x.at("overhang"), x.at("wwr_west"), x.at("wwr_south"), upper, lower);
}

class CampaignRuns : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    default_dir_ = new fs::path(fs::temp_directory_path() / ("rsm_campaign_default_" + std::to_string(::getpid())));
    pinned_dir_ = new fs::path(fs::temp_directory_path() / ("rsm_campaign_pinned_" + std::to_string(::getpid())));
    fs::remove_all(*default_dir_);
    fs::remove_all(*pinned_dir_);
    default_ = new CampaignState(run(CampaignConfig::housing_default(), *default_dir_));
    pinned_ = new CampaignState(run(pinned_config(), *pinned_dir_));
  }
  static void TearDownTestSuite() {
    fs::remove_all(*default_dir_);
    fs::remove_all(*pinned_dir_);
    delete default_;
    delete pinned_;
    delete default_dir_;
    delete pinned_dir_;
  }
  static CampaignState* default_;
  static CampaignState* pinned_;
  static fs::path* default_dir_;
  static fs::path* pinned_dir_;
};

CampaignState* CampaignRuns::default_ = nullptr;
CampaignState* CampaignRuns::pinned_ = nullptr;
fs::path* CampaignRuns::default_dir_ = nullptr;
fs::path* CampaignRuns::pinned_dir_ = nullptr;

}  // namespace

TEST_F(CampaignRuns, PinnedConfigRunCounts) {
  EXPECT_EQ(pinned_->status(), "completed");
  const std::vector<int> expect{64, 11, 12, 11, 12, 11, 17, 1};
  EXPECT_EQ(pinned_->stage_run_counts(), expect);
  int design_runs = 0;
  for (const auto& s : pinned_->stages())
    if (s.at("kind") != "canonical") design_runs += s.value("evaluations", 0);
  EXPECT_EQ(design_runs, 138);
  EXPECT_EQ(pinned_->total_evaluations(), 139);
}

TEST_F(CampaignRuns, PinnedConfigFindsMaximumNearOptimum) {
  const Json& r = pinned_->result();
  EXPECT_EQ(r.at("classification"), "maximum");
  for (const auto& l : r.at("eigenvalues")) EXPECT_LT(l.get<double>(), 0.0);
  const auto xs = r.at("stationary_natural").get<std::map<std::string, double>>();
  const Json& ccd = stage_of_kind(*pinned_, "ccd");
  EXPECT_LT(coded_distance(ccd.at("design").at("factors"), xs, surrogate_optimum()), 0.1);
}

TEST_F(CampaignRuns, DefaultConfigMeetsBudgetAndOptimum) {
  const CampaignState& st = *default_;
  EXPECT_EQ(st.status(), "completed");
  EXPECT_LE(st.total_evaluations(), 150);
  const Json& r = st.result();
  EXPECT_EQ(r.at("classification"), "maximum");
  const Json& des = st.doc.at("desirability");
  const double upper = des.at("IOH").at("upper"), lower = des.at("UDI").at("lower");
  const double d_opt = d_at(surrogate_optimum(), upper, lower);
  EXPECT_NEAR(r.at("confirmation_D").get<double>(), d_opt, 0.005);
  const auto xs = r.at("stationary_natural").get<std::map<std::string, double>>();
  EXPECT_LT(coded_distance(stage_of_kind(st, "ccd").at("design").at("factors"), xs, surrogate_optimum()), 0.1);
}

TEST_F(CampaignRuns, EvaluationCountIsStageSum) {
  for (const CampaignState* st : {default_, pinned_}) {
    int sum = 0;
    for (const auto& s : st->stages()) {
      const int n = s.value("evaluations", 0);
      sum += n;
      if (s.contains("design") && s.at("kind") != "bootstrap") {
        EXPECT_EQ(static_cast<int>(s.at("design").at("runs").size()), n) << s.at("stage_id");
        for (const auto& [name, col] : s.at("responses").items()) EXPECT_EQ(static_cast<int>(col.size()), n) << name;
      }
    }
    EXPECT_EQ(sum, st->total_evaluations());
    EXPECT_EQ(st->doc.at("evaluations").get<int>(), sum);
  }
}

TEST_F(CampaignRuns, LimitsFrozenAtScreening) {
  for (const CampaignState* st : {default_, pinned_}) {
    const Json& des = st->doc.at("desirability");
    const double upper = des.at("IOH").at("upper"), lower = des.at("UDI").at("lower");
    const double t1 = des.at("IOH").at("target"), t2 = des.at("UDI").at("target");
    for (const auto& s : st->stages()) {
      if (!s.contains("desirabilities")) continue;
      const auto ioh = s.at("responses").at("IOH").get<std::vector<double>>();
      const auto udi = s.at("responses").at("UDI").get<std::vector<double>>();
      const auto d = s.at("desirabilities").at("D").get<std::vector<double>>();
      ASSERT_EQ(d.size(), ioh.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double d1 = std::clamp((upper - ioh[i]) / (upper - t1), 0.0, 1.0);
        const double d2 = std::clamp((udi[i] - lower) / (t2 - lower), 0.0, 1.0);
        EXPECT_NEAR(d[i], std::sqrt(d1 * d2), 1e-12) << s.at("stage_id") << " run " << i;
      }
    }
  }
  // configs/housing.json pins the limits; the default derives them from screening.
  EXPECT_DOUBLE_EQ(pinned_->doc.at("desirability").at("IOH").at("upper").get<double>(), 19.32);
  EXPECT_DOUBLE_EQ(pinned_->doc.at("desirability").at("UDI").at("lower").get<double>(), 35.25);
  const Json& screen = stage_of_kind(*default_, "screening");
  const auto ioh = screen.at("responses").at("IOH").get<std::vector<double>>();
  const auto udi = screen.at("responses").at("UDI").get<std::vector<double>>();
  EXPECT_DOUBLE_EQ(default_->doc.at("desirability").at("IOH").at("upper").get<double>(),
                   *std::max_element(ioh.begin(), ioh.end()));
  EXPECT_DOUBLE_EQ(default_->doc.at("desirability").at("UDI").at("lower").get<double>(),
                   *std::min_element(udi.begin(), udi.end()));
}

TEST_F(CampaignRuns, CurvatureHandOffFiresIffAdequacyFails) {
  for (const CampaignState* st : {default_, pinned_}) {
    const Json& stages = st->stages();
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
      if (stages[i].at("kind") != "fo") continue;
      const Json& dec = stages[i].at("decision");
      const bool adequate = dec.at("adequate");
      const double p = dec.at("f_pvalue");
      const Json& lof = dec.at("lack_of_fit_p");
      EXPECT_EQ(adequate, p <= 0.05 && (lof.is_null() || lof.get<double>() > 0.05));
      EXPECT_EQ(stages[i + 1].at("kind"), adequate ? "ascent" : "ccd");
      EXPECT_EQ(dec.at("next"), stages[i + 1].at("kind"));
    }
    const Json& ccd = stage_of_kind(*st, "ccd").at("decision");
    EXPECT_LT(ccd.at("bic_so").get<double>(), ccd.at("bic_fo").get<double>());
    EXPECT_TRUE(ccd.at("second_order_preferred").get<bool>());
  }
}

TEST_F(CampaignRuns, StageKindsFollowGrammar) {
  for (const CampaignState* st : {default_, pinned_}) {
    std::vector<std::string> kinds;
    for (const auto& s : st->stages()) kinds.push_back(s.at("kind"));
    EXPECT_NO_THROW(rsm::check_stage_grammar(kinds));
    EXPECT_EQ(kinds.front(), "screening");
    EXPECT_EQ(kinds.back(), "bootstrap");
  }
}

TEST_F(CampaignRuns, AscentCenterNearPathOptimum) {
  const Json& st = stage_of_kind(*default_, "ascent");
  const Json& des = default_->doc.at("desirability");
  const double upper = des.at("IOH").at("upper"), lower = des.at("UDI").at("lower");
  const Json& model = st.at("model");
  const Json& factors = model.at("factors");
  const auto dir = model.at("direction").get<std::vector<double>>();
  // Dense search for the noiseless maximum of D along the continuous path.
  double best_t = 0.0, best_d = -1.0;
  for (int i = 0; i <= 60000; ++i) {
    const double t = 6.0 * i / 60000.0;
    std::map<std::string, double> x;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const double lo = factors[j].at("low"), hi = factors[j].at("high");
      x[factors[j].at("name")] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t * dir[j];
    }
    const double d = d_at(x, upper, lower);
    if (d > best_d) best_d = d, best_t = t;
  }
  const double chosen = st.at("decision").at("best_distance");
  EXPECT_LE(std::abs(chosen - best_t), 0.25) << "continuous optimum at t=" << best_t;
}

TEST(Campaign, DeterministicAcrossRuns) {
  const auto cfg = CampaignConfig::housing_default();
  const auto a = run(cfg, scratch("a"));
  const auto b = run(cfg, scratch("b"));
  EXPECT_EQ(a.without_timestamps().dump(), b.without_timestamps().dump());
  EXPECT_TRUE(a.doc.contains("timestamps"));
  fs::remove_all(scratch("a"));
  fs::remove_all(scratch("b"));
}

TEST(Campaign, ResumeAfterStopMatchesUninterrupted) {
  const auto cfg = CampaignConfig::housing_default();
  const auto full = run(cfg, scratch("full"));
  for (int k : {1, 3, 5}) {
    const fs::path dir = scratch("stop" + std::to_string(k));
    const auto partial = run(cfg, dir, false, k);
    EXPECT_EQ(partial.status(), "interrupted");
    EXPECT_EQ(static_cast<int>(partial.stages().size()), k);
    EXPECT_EQ(CampaignState::load(dir / "state.json").without_timestamps(), partial.without_timestamps());
    const auto resumed = run(cfg, dir, true);
    EXPECT_EQ(resumed.without_timestamps().dump(), full.without_timestamps().dump()) << "stop after " << k;
    fs::remove_all(dir);
  }
  fs::remove_all(scratch("full"));
}

TEST(Campaign, EvaluatorFailureIsResumable) {
  const auto cfg = CampaignConfig::housing_default();
  const auto full = run(cfg, scratch("full"));
  const fs::path dir = scratch("flaky");
  auto inner = rsm::make_evaluator(cfg, dir);
  FlakyEvaluator flaky(*inner, 3);
  CampaignOptions opt;
  opt.workdir = dir;
  EXPECT_THROW(rsm::run_campaign(cfg, flaky, opt), rsm::CampaignEvaluationError);
  const auto saved = CampaignState::load(dir / "state.json");
  EXPECT_EQ(saved.status(), "failed");
  ASSERT_EQ(saved.stages().size(), 3u);
  EXPECT_EQ(saved.stages()[2].at("status"), "failed");
  EXPECT_EQ(saved.stages()[1].at("status"), "completed");
  const auto resumed = run(cfg, dir, true);
  EXPECT_EQ(resumed.without_timestamps().dump(), full.without_timestamps().dump());
  fs::remove_all(dir);
  fs::remove_all(scratch("full"));
}

TEST(Campaign, ResumeRejectsChangedConfig) {
  auto cfg = CampaignConfig::housing_default();
  const fs::path dir = scratch("cfg");
  run(cfg, dir, false, 1);
  cfg.seed += 1;
  EXPECT_THROW(run(cfg, dir, true), rsm::InvalidInput);
  fs::remove_all(dir);
}

TEST(Campaign, ConfigJsonRoundTrip) {
  const auto cfg = pinned_config();
  const auto back = CampaignConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_EQ(back.factors.size(), 8u);
}

TEST(Campaign, GrammarAcceptsValidSequences) {
  using V = std::vector<std::string>;
  EXPECT_NO_THROW(rsm::check_stage_grammar(V{}));
  EXPECT_NO_THROW(rsm::check_stage_grammar(V{"screening", "fo", "ccd", "canonical", "bootstrap"}));
  EXPECT_NO_THROW(rsm::check_stage_grammar(V{"fo", "ascent", "fo", "ascent", "fo", "ccd", "canonical", "bootstrap"}));
  EXPECT_NO_THROW(rsm::check_stage_grammar(V{"screening", "fo", "ascent"}));
}

TEST(Campaign, GrammarRejectsInvalidSequences) {
  using V = std::vector<std::string>;
  for (const V& kinds : {V{"ascent"}, V{"screening", "ccd"}, V{"fo", "ascent", "ccd"}, V{"fo", "fo"},
                         V{"fo", "ccd", "bootstrap"}, V{"screening", "screening"},
                         V{"fo", "ccd", "canonical", "bootstrap", "fo"}, V{"fo", "unknown"}}) {
    EXPECT_THROW(rsm::check_stage_grammar(kinds), rsm::Error);
  }
}
