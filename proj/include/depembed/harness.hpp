#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depembed/aaeme.hpp"
#include "depembed/classifiers.hpp"
#include "depembed/dataset.hpp"
#include "depembed/embedding.hpp"
#include "depembed/featurizer.hpp"
#include "depembed/mapper.hpp"
#include "depembed/text_pipeline.hpp"

namespace depembed {

enum class FeatureKind { kBow, kCategoryLexicon, kEmotionLexicon, kEmbeddingAvg, kPadConcat };

struct PreparedTexts {
  std::vector<std::vector<std::string>> raw_tokens;  // lowercased tweet tokens
  std::vector<std::vector<std::string>> bow_tokens;  // stopword-filtered, stemmed
};

PreparedTexts prepare_texts(const std::vector<std::string>& texts, const StopwordPolicy& policy);

// Everything a run needs besides per-run randomness. Feature resources are
// borrowed, not owned.
struct ExperimentContext {
  const LabeledDataset* dataset = nullptr;
  PreparedTexts prepared;
  const Embedding* embedding = nullptr;
  const CategoryLexicon* category_lexicon = nullptr;
  const EmotionLexicon* emotion_lexicon = nullptr;
};

ExperimentContext make_context(const LabeledDataset& dataset, const StopwordPolicy& policy);

struct ExperimentConfig {
  FeatureKind feature_kind = FeatureKind::kBow;
  std::string feature_name = "bow";  // label echoed in reports
  ModelFamily model = ModelFamily::kLinearSvm;
  ParamGrid grid = ParamGrid::paper_default();
  std::size_t repetitions = 30;
  std::uint64_t master_seed = 0;
  double train_fraction = 0.7;
  std::size_t cv_folds = 10;
  bool scale_features = true;  // min-max fitted on the training split
  std::size_t bow_size = 400;
  std::size_t workers = 1;  // parallel runs; runs stay independent and seeded
  SolverOptions solver;
};

struct RunRecord {
  std::uint64_t seed = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double chosen_c = 0.0;
  double chosen_gamma = 0.0;
  std::size_t train_size = 0, test_size = 0;
  std::size_t train_positives = 0, test_positives = 0;
  std::size_t all_oov_train = 0, all_oov_test = 0;  // tweets with no in-vocab token
};

struct EvalReport {
  std::string feature_name;
  std::string model_name;
  std::vector<RunRecord> runs;
  double mean_precision = 0.0, std_precision = 0.0;
  double mean_recall = 0.0, std_recall = 0.0;
  double mean_f1 = 0.0, std_f1 = 0.0;
  bool single_run = false;  // std reported as 0 by convention

  void finalize();  // recomputes the aggregates from runs
};

// One full protocol pass: stratified split, train-only featurizer fitting,
// grid-search CV on the training split, refit, test metrics.
RunRecord run_experiment(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                         std::uint64_t seed, AnyModel* refit_out = nullptr);

// Repetitions with per-run seeds derived from the master seed; adding runs
// never changes earlier ones.
EvalReport repeat_experiments(const ExperimentContext& ctx, const ExperimentConfig& cfg);

// Feature matrix + diagnostics for a whole dataset under one representation
// (featurizer artifacts fitted on the rows given, so call per split).
struct FeaturizeResult {
  Eigen::MatrixXd matrix;
  std::size_t all_oov_rows = 0;
};

// Fits the featurizer on every row and transforms them all; the standalone
// export path behind the featurize subcommand.
FeaturizeResult featurize_full_dataset(const ExperimentContext& ctx, const ExperimentConfig& cfg);

std::string report_json(const EvalReport& report);
std::string report_table(const std::vector<EvalReport>& reports);

struct AblationConfig {
  ExperimentConfig experiment;  // feature_kind/name are overridden per space
  MapperTrainConfig mapper;
  CentroidConfig centroid;  // k_near/k_far/lambda; both variants are run
  AaemeConfig aaeme;
  bool include_centroids = true;
  bool include_aaeme = true;
};

struct AblationResult {
  std::vector<EvalReport> reports;  // one per feature space, shared seed schedule
};

// Evaluates the embedding feature spaces {TE, DE, ATE, common-in-TE-adjusted,
// ATE-Centroid-1/2, AAEME, AAEME-OOV} under identical splits. ATE and the
// partial adjustment share one trained mapper.
AblationResult ablation_suite(const LabeledDataset& dataset, const StopwordPolicy& policy,
                              const Embedding& te, const Embedding& de,
                              const AblationConfig& cfg);

}  // namespace depembed
