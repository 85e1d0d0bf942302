#include "depembed/harness.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "depembed/metrics.hpp"
#include "depembed/splits.hpp"
#include "depembed/util.hpp"

namespace depembed {

namespace {

using nlohmann::json;

std::vector<std::size_t> gather_counts(const std::vector<int>& labels,
                                       const std::vector<std::size_t>& idx) {
  std::size_t pos = 0;
  for (auto i : idx) pos += labels[i] == 1 ? 1 : 0;
  return {idx.size(), pos};
}

struct FittedFeaturizer {
  FeatureKind kind;
  BowVocab bow;
  std::size_t max_len = 1;  // pad-concat length, from the training split
};

FittedFeaturizer fit_featurizer(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                                const std::vector<std::size_t>& train_idx) {
  FittedFeaturizer f;
  f.kind = cfg.feature_kind;
  if (cfg.feature_kind == FeatureKind::kBow) {
    std::vector<std::vector<std::string>> train_tokens;
    train_tokens.reserve(train_idx.size());
    for (auto i : train_idx) train_tokens.push_back(ctx.prepared.bow_tokens[i]);
    f.bow = fit_bow(train_tokens, cfg.bow_size);
  } else if (cfg.feature_kind == FeatureKind::kPadConcat) {
    std::size_t max_len = 1;
    for (auto i : train_idx) max_len = std::max(max_len, ctx.prepared.raw_tokens[i].size());
    f.max_len = max_len;
  }
  return f;
}

FeaturizeResult featurize_rows(const ExperimentContext& ctx, const FittedFeaturizer& f,
                               const std::vector<std::size_t>& idx) {
  FeaturizeResult out;
  Eigen::Index cols = 0;
  switch (f.kind) {
    case FeatureKind::kBow: cols = static_cast<Eigen::Index>(f.bow.size()); break;
    case FeatureKind::kCategoryLexicon:
      if (ctx.category_lexicon == nullptr) throw std::invalid_argument("no category lexicon loaded");
      cols = static_cast<Eigen::Index>(ctx.category_lexicon->category_count());
      break;
    case FeatureKind::kEmotionLexicon:
      if (ctx.emotion_lexicon == nullptr) throw std::invalid_argument("no emotion lexicon loaded");
      cols = EmotionLexicon::kEmotionCount;
      break;
    case FeatureKind::kEmbeddingAvg:
      if (ctx.embedding == nullptr) throw std::invalid_argument("no embedding loaded");
      cols = static_cast<Eigen::Index>(ctx.embedding->dim());
      break;
    case FeatureKind::kPadConcat:
      if (ctx.embedding == nullptr) throw std::invalid_argument("no embedding loaded");
      cols = static_cast<Eigen::Index>(f.max_len * ctx.embedding->dim());
      break;
  }

  out.matrix.resize(static_cast<Eigen::Index>(idx.size()), cols);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const std::size_t i = idx[r];
    Eigen::VectorXd v;
    switch (f.kind) {
      case FeatureKind::kBow:
        v = bow_vector(ctx.prepared.bow_tokens[i], f.bow);
        break;
      case FeatureKind::kCategoryLexicon:
        v = category_percentages(ctx.prepared.raw_tokens[i], *ctx.category_lexicon);
        break;
      case FeatureKind::kEmotionLexicon:
        v = emotion_scores(ctx.prepared.raw_tokens[i], *ctx.emotion_lexicon);
        break;
      case FeatureKind::kEmbeddingAvg: {
        bool all_oov = false;
        v = avg_embedding(ctx.prepared.raw_tokens[i], *ctx.embedding, &all_oov);
        if (all_oov) ++out.all_oov_rows;
        break;
      }
      case FeatureKind::kPadConcat:
        v = pad_concat(ctx.prepared.raw_tokens[i], *ctx.embedding, f.max_len);
        break;
    }
    out.matrix.row(static_cast<Eigen::Index>(r)) = v.transpose();
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

PreparedTexts prepare_texts(const std::vector<std::string>& texts, const StopwordPolicy& policy) {
  PreparedTexts out;
  out.raw_tokens.reserve(texts.size());
  out.bow_tokens.reserve(texts.size());
  for (const auto& text : texts) {
    auto tokens = tokenize_tweet(text);
    auto filtered = filter_stopwords(tokens, policy);
    std::vector<std::string> stemmed;
    stemmed.reserve(filtered.size());
    for (const auto& tok : filtered) stemmed.push_back(porter_stem(tok));
    out.raw_tokens.push_back(std::move(tokens));
    out.bow_tokens.push_back(std::move(stemmed));
  }
  return out;
}

ExperimentContext make_context(const LabeledDataset& dataset, const StopwordPolicy& policy) {
  ExperimentContext ctx;
  ctx.dataset = &dataset;
  ctx.prepared = prepare_texts(dataset.texts, policy);
  return ctx;
}

void EvalReport::finalize() {
  std::vector<double> p, r, f;
  for (const auto& run : runs) {
    p.push_back(run.precision);
    r.push_back(run.recall);
    f.push_back(run.f1);
  }
  mean_precision = mean(p);
  std_precision = sample_std(p);
  mean_recall = mean(r);
  std_recall = sample_std(r);
  mean_f1 = mean(f);
  std_f1 = sample_std(f);
  single_run = runs.size() == 1;
}

RunRecord run_experiment(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                         std::uint64_t seed, AnyModel* refit_out) {
  if (ctx.dataset == nullptr) throw std::invalid_argument("context has no dataset");
  const auto& labels = ctx.dataset->labels;

  const bool embedding_features = cfg.feature_kind == FeatureKind::kEmbeddingAvg ||
                                  cfg.feature_kind == FeatureKind::kPadConcat;
  if (cfg.model == ModelFamily::kNaiveBayes && embedding_features && !cfg.scale_features)
    throw std::invalid_argument(
        "multinomial NB needs nonnegative features: embedding features require min-max scaling");

  SplitIndices split = stratified_split(labels, cfg.train_fraction, seed);

  // Featurizer artifacts come from the training split only.
  FittedFeaturizer featurizer = fit_featurizer(ctx, cfg, split.train);
  FeaturizeResult train_feat = featurize_rows(ctx, featurizer, split.train);
  FeaturizeResult test_feat = featurize_rows(ctx, featurizer, split.test);

  Eigen::MatrixXd Xtr = train_feat.matrix;
  Eigen::MatrixXd Xte = test_feat.matrix;
  if (cfg.scale_features) {
    MinMaxScaler scaler = fit_minmax(Xtr);
    Xtr = apply_minmax(scaler, Xtr);
    Xte = apply_minmax(scaler, Xte);
  }

  std::vector<int> ytr, yte;
  for (auto i : split.train) ytr.push_back(labels[i]);
  for (auto i : split.test) yte.push_back(labels[i]);

  GridSearchResult search =
      grid_search_cv(Xtr, ytr, cfg.model, cfg.grid, cfg.cv_folds, derive_seed(seed, 1), cfg.solver);

  std::vector<int> pred = predict(search.refit, Xte);
  Prf1 metrics = prf1(yte, pred);

  RunRecord rec;
  rec.seed = seed;
  rec.precision = metrics.precision;
  rec.recall = metrics.recall;
  rec.f1 = metrics.f1;
  rec.chosen_c = search.best_c;
  rec.chosen_gamma = search.best_gamma;
  auto tr_counts = gather_counts(labels, split.train);
  auto te_counts = gather_counts(labels, split.test);
  rec.train_size = tr_counts[0];
  rec.train_positives = tr_counts[1];
  rec.test_size = te_counts[0];
  rec.test_positives = te_counts[1];
  rec.all_oov_train = train_feat.all_oov_rows;
  rec.all_oov_test = test_feat.all_oov_rows;
  if (refit_out != nullptr) *refit_out = search.refit;
  return rec;
}

EvalReport repeat_experiments(const ExperimentContext& ctx, const ExperimentConfig& cfg) {
  if (cfg.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  EvalReport report;
  report.feature_name = cfg.feature_name;
  report.model_name = to_string(cfg.model);
  report.runs.resize(cfg.repetitions);

  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.repetitions));
  if (workers == 1) {
    for (std::size_t i = 0; i < cfg.repetitions; ++i)
      report.runs[i] = run_experiment(ctx, cfg, derive_seed(cfg.master_seed, i));
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::string first_error;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cfg.repetitions; i = next.fetch_add(1)) {
          try {
            report.runs[i] = run_experiment(ctx, cfg, derive_seed(cfg.master_seed, i));
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (first_error.empty()) first_error = e.what();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (!first_error.empty()) throw std::runtime_error(first_error);
  }
  report.finalize();
  return report;
}

std::string report_json(const EvalReport& report) {
  json j;
  j["feature"] = report.feature_name;
  j["model"] = report.model_name;
  j["aggregates"] = {
      {"mean_precision", report.mean_precision}, {"std_precision", report.std_precision},
      {"mean_recall", report.mean_recall},       {"std_recall", report.std_recall},
      {"mean_f1", report.mean_f1},               {"std_f1", report.std_f1},
      {"runs", report.runs.size()},              {"single_run", report.single_run}};
  j["runs"] = json::array();
  for (const auto& run : report.runs) {
    json r;
    r["seed"] = run.seed;
    r["precision"] = run.precision;
    r["recall"] = run.recall;
    r["f1"] = run.f1;
    r["chosen_c"] = run.chosen_c;
    if (!std::isnan(run.chosen_gamma)) r["chosen_gamma"] = run.chosen_gamma;
    r["train_size"] = run.train_size;
    r["train_positives"] = run.train_positives;
    r["test_size"] = run.test_size;
    r["test_positives"] = run.test_positives;
    r["all_oov_train"] = run.all_oov_train;
    r["all_oov_test"] = run.all_oov_test;
    j["runs"].push_back(r);
  }
  return j.dump(2) + "\n";
}

std::string report_table(const std::vector<EvalReport>& reports) {
  std::ostringstream os;
  std::size_t name_w = 12;
  for (const auto& r : reports)
    name_w = std::max(name_w, r.model_name.size() + r.feature_name.size() + 1);
  os << std::left << std::setw(static_cast<int>(name_w + 2)) << "Model-Feat." << std::right
     << std::setw(18) << "Prec." << std::setw(18) << "Rec." << std::setw(18) << "F1" << "\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(static_cast<int>(name_w + 2)) << (r.model_name + "-" + r.feature_name)
       << std::right << std::setw(18)
       << (format_double(r.mean_precision) + "±" + format_double(r.std_precision)) << std::setw(18)
       << (format_double(r.mean_recall) + "±" + format_double(r.std_recall)) << std::setw(18)
       << (format_double(r.mean_f1) + "±" + format_double(r.std_f1)) << "\n";
  }
  return os.str();
}

AblationResult ablation_suite(const LabeledDataset& dataset, const StopwordPolicy& policy,
                              const Embedding& te, const Embedding& de,
                              const AblationConfig& cfg) {
  if (te.dim() != de.dim())
    throw std::invalid_argument("ablation suite expects dimension-compatible embeddings");

  // One mapper serves both ATE and the partial adjustment.
  MlpMapper mapper = train_mapper(te, de, cfg.mapper);
  Embedding ate = build_ate(te, mapper);
  Embedding partial = build_partial_adjusted(te, de, mapper);

  struct Space {
    std::string name;
    Embedding embedding;
  };
  std::vector<Space> spaces;
  spaces.push_back({"te", te});
  spaces.push_back({"de", de});
  spaces.push_back({"ate", std::move(ate)});
  spaces.push_back({"common-in-te-adjusted", std::move(partial)});

  if (cfg.include_centroids) {
    CentroidConfig c1 = cfg.centroid;
    c1.variant = CentroidVariant::kCentroid1;
    MlpMapper m1 = train_centroid_mapper(te, de, cfg.mapper, c1);
    spaces.push_back({"ate-centroid-1", build_ate(te, m1)});
    CentroidConfig c2 = cfg.centroid;
    c2.variant = CentroidVariant::kCentroid2;
    MlpMapper m2 = train_centroid_mapper(te, de, cfg.mapper, c2);
    spaces.push_back({"ate-centroid-2", build_ate(te, m2)});
  }
  if (cfg.include_aaeme) {
    AaemeModel both = train_aaeme(te, de, cfg.aaeme);
    spaces.push_back({"ate-aaeme", build_meta_embedding(both, te, de)});
    const Embedding& ate_ref = spaces[2].embedding;
    AaemeModel oov = train_aaeme(te, ate_ref, cfg.aaeme);
    spaces.push_back({"ate-aaeme-oov", build_meta_embedding(oov, te, ate_ref)});
  }

  ExperimentContext ctx = make_context(dataset, policy);
  AblationResult result;
  for (const auto& space : spaces) {
    ExperimentConfig run_cfg = cfg.experiment;
    run_cfg.feature_kind = FeatureKind::kEmbeddingAvg;
    run_cfg.feature_name = space.name;
    ctx.embedding = &space.embedding;
    result.reports.push_back(repeat_experiments(ctx, run_cfg));
  }
  return result;
}

}  // namespace depembed
