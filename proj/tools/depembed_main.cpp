#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "depembed/aaeme.hpp"
#include "depembed/classifiers.hpp"
#include "depembed/dataset.hpp"
#include "depembed/embedding.hpp"
#include "depembed/featurizer.hpp"
#include "depembed/harness.hpp"
#include "depembed/mapper.hpp"
#include "depembed/pca.hpp"
#include "depembed/sgns.hpp"
#include "depembed/text_pipeline.hpp"
#include "depembed/util.hpp"

#ifndef DEPEMBED_DATA_DIR
#define DEPEMBED_DATA_DIR "data"
#endif

namespace {

namespace fs = std::filesystem;
using namespace depembed;

std::string data_file(const char* name) {
  return (fs::path(DEPEMBED_DATA_DIR) / name).string();
}

struct TextOptions {
  std::string stopwords = data_file("stopwords_en.txt");
  std::string emoticons = data_file("emoticons.txt");

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--stopwords", stopwords, "Stopword list, one word per line")
        ->capture_default_str();
    cmd->add_option("--emoticons", emoticons, "Emoticon inventory, one per line")
        ->capture_default_str();
  }

  StopwordPolicy apply() const {
    set_emoticon_inventory(load_wordlist(emoticons));
    return StopwordPolicy::from_files(stopwords);
  }
};

void save_embedding(const Embedding& emb, const std::string& path, bool binary) {
  if (binary) save_embedding_binary(emb, path);
  else save_word2vec_text(emb, path);
}

// Every run logs its fully-resolved configuration for reproduction.
void echo_config(CLI::App& app, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "config_resolved.cfg", std::ios::binary);
  out << app.config_to_str(true, true);
}

std::vector<std::vector<std::string>> corpus_sentences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  std::vector<std::vector<std::string>> sentences;
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& sent : split_sentences(line)) {
      auto tokens = tokenize_tweet(sent);
      if (!tokens.empty()) sentences.push_back(std::move(tokens));
    }
  }
  return sentences;
}

FeatureKind parse_feature_kind(const std::string& name, bool has_embedding,
                               std::string* label) {
  *label = name;
  if (name == "bow") return FeatureKind::kBow;
  if (name == "categories" || name == "liwc") return FeatureKind::kCategoryLexicon;
  if (name == "emotions" || name == "nhel") return FeatureKind::kEmotionLexicon;
  if (name == "pad-concat") return FeatureKind::kPadConcat;
  // anything else names an embedding-average space ("te", "de", "ate", ...)
  if (!has_embedding)
    throw CLI::ValidationError("--features " + name + " requires --embedding PATH");
  return FeatureKind::kEmbeddingAvg;
}

int cmd_train_embedding(const std::string& corpus, const std::string& out, SgnsConfig cfg,
                        bool binary, const TextOptions& text) {
  text.apply();  // emoticon inventory affects tokenization
  auto sentences = corpus_sentences(corpus);
  std::cerr << "corpus: " << sentences.size() << " sentences\n";
  SgnsModel model = train_sgns_model(sentences, cfg);
  std::cerr << "vocabulary: " << model.embedding.size() << " words";
  if (!model.epoch_losses.empty())
    std::cerr << ", final epoch loss " << model.epoch_losses.back();
  std::cerr << "\n";
  save_embedding(model.embedding, out, binary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-enriched word embedding toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");
  app.allow_config_extras(false);

  // ---- train-embedding ----------------------------------------------------
  auto* train_cmd = app.add_subcommand("train-embedding",
                                       "Train a skip-gram negative-sampling embedding");
  std::string corpus_path, train_out;
  SgnsConfig sgns_cfg;
  bool train_binary = false;
  TextOptions train_text;
  train_cmd->add_option("--corpus", corpus_path, "Corpus file, one post per line")->required();
  train_cmd->add_option("--out", train_out, "Output embedding path")->required();
  train_cmd->add_option("--dim", sgns_cfg.dim)->capture_default_str();
  train_cmd->add_option("--window", sgns_cfg.window)->capture_default_str();
  train_cmd->add_option("--mincount", sgns_cfg.mincount)->capture_default_str();
  train_cmd->add_option("--negatives", sgns_cfg.negatives)->capture_default_str();
  train_cmd->add_option("--epochs", sgns_cfg.epochs)->capture_default_str();
  train_cmd->add_option("--lr", sgns_cfg.learning_rate)->capture_default_str();
  train_cmd->add_option("--subsample", sgns_cfg.subsample)->capture_default_str();
  train_cmd->add_option("--seed", sgns_cfg.seed)->capture_default_str();
  train_cmd->add_option("--workers", sgns_cfg.workers, "Training threads (1 = deterministic)")
      ->capture_default_str();
  train_cmd->add_flag("--binary", train_binary, "Write the binary sidecar format");
  train_text.add_flags(train_cmd);

  // ---- map ---------------------------------------------------------------
  auto* map_cmd = app.add_subcommand("map", "Train the source-to-target mapper");
  std::string map_source, map_target, map_out;
  MapperTrainConfig map_cfg;
  bool map_linear = false;
  map_cmd->add_option("--source", map_source, "Source embedding (TE)")->required();
  map_cmd->add_option("--target", map_target, "Target embedding (DE)")->required();
  map_cmd->add_option("--out", map_out, "Mapper checkpoint path")->required();
  map_cmd->add_option("--hidden", map_cfg.hidden_units)->capture_default_str();
  map_cmd->add_option("--epochs", map_cfg.epochs)->capture_default_str();
  map_cmd->add_option("--batch", map_cfg.batch_size)->capture_default_str();
  map_cmd->add_option("--lr", map_cfg.learning_rate)->capture_default_str();
  map_cmd->add_option("--seed", map_cfg.seed)->capture_default_str();
  map_cmd->add_option("--val-fraction", map_cfg.validation_fraction)->capture_default_str();
  map_cmd->add_option("--patience", map_cfg.patience)->capture_default_str();
  map_cmd->add_flag("--linear", map_linear, "Least-squares affine map instead of the MLP");

  // ---- map-centroid --------------------------------------------------------
  auto* centroid_cmd = app.add_subcommand("map-centroid", "Train a centroid-loss mapper");
  std::string cen_source, cen_target, cen_out;
  MapperTrainConfig cen_cfg;
  CentroidConfig cen_ccfg;
  int cen_variant = 1;
  centroid_cmd->add_option("--source", cen_source)->required();
  centroid_cmd->add_option("--target", cen_target)->required();
  centroid_cmd->add_option("--out", cen_out)->required();
  centroid_cmd->add_option("--variant", cen_variant, "1 = toward near centroids, 2 = also away from far")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  centroid_cmd->add_option("--k-near", cen_ccfg.k_near)->capture_default_str();
  centroid_cmd->add_option("--k-far", cen_ccfg.k_far)->capture_default_str();
  centroid_cmd->add_option("--far-weight", cen_ccfg.far_weight)->capture_default_str();
  centroid_cmd->add_option("--hidden", cen_cfg.hidden_units)->capture_default_str();
  centroid_cmd->add_option("--epochs", cen_cfg.epochs)->capture_default_str();
  centroid_cmd->add_option("--batch", cen_cfg.batch_size)->capture_default_str();
  centroid_cmd->add_option("--lr", cen_cfg.learning_rate)->capture_default_str();
  centroid_cmd->add_option("--seed", cen_cfg.seed)->capture_default_str();

  // ---- build-ate -----------------------------------------------------------
  auto* ate_cmd = app.add_subcommand("build-ate", "Apply a mapper to every source word");
  std::string ate_source, ate_mapper, ate_out, ate_copy;
  bool ate_binary = false;
  ate_cmd->add_option("--source", ate_source, "Source embedding (TE)")->required();
  ate_cmd->add_option("--mapper", ate_mapper, "Mapper checkpoint")->required();
  ate_cmd->add_option("--out", ate_out)->required();
  ate_cmd->add_option("--copy-common", ate_copy,
                      "Copy vectors for words present in this embedding instead of mapping them");
  ate_cmd->add_flag("--binary", ate_binary);

  // ---- ablate-partial --------------------------------------------------------
  auto* partial_cmd = app.add_subcommand(
      "ablate-partial", "Adjust only common-vocabulary words, keep the rest of TE");
  std::string par_source, par_target, par_mapper, par_out;
  bool par_binary = false;
  partial_cmd->add_option("--source", par_source)->required();
  partial_cmd->add_option("--target", par_target)->required();
  partial_cmd->add_option("--mapper", par_mapper)->required();
  partial_cmd->add_option("--out", par_out)->required();
  partial_cmd->add_flag("--binary", par_binary);

  // ---- aaeme ---------------------------------------------------------------
  auto* aaeme_cmd = app.add_subcommand("aaeme", "Train an averaged autoencoded meta-embedding");
  std::string aa_src1, aa_src2, aa_out, aa_emb_out;
  AaemeConfig aa_cfg;
  bool aa_binary = false;
  aaeme_cmd->add_option("--source1", aa_src1)->required();
  aaeme_cmd->add_option("--source2", aa_src2)->required();
  aaeme_cmd->add_option("--out", aa_out, "Model checkpoint path")->required();
  aaeme_cmd->add_option("--emit-embedding", aa_emb_out, "Also write the meta-embedding here");
  aaeme_cmd->add_option("--meta-dim", aa_cfg.meta_dim, "0 = source1 dimension")->capture_default_str();
  aaeme_cmd->add_flag("--tanh", aa_cfg.tanh_encoders, "tanh encoders instead of linear");
  aaeme_cmd->add_flag("!--no-normalize", aa_cfg.normalize_inputs,
                      "Disable per-word L2 input normalization");
  aaeme_cmd->add_option("--epochs", aa_cfg.epochs)->capture_default_str();
  aaeme_cmd->add_option("--batch", aa_cfg.batch_size)->capture_default_str();
  aaeme_cmd->add_option("--lr", aa_cfg.learning_rate)->capture_default_str();
  aaeme_cmd->add_option("--seed", aa_cfg.seed)->capture_default_str();
  aaeme_cmd->add_flag("--binary", aa_binary);

  // ---- featurize -------------------------------------------------------------
  auto* feat_cmd = app.add_subcommand("featurize", "Write a feature matrix for a dataset");
  std::string ft_dataset, ft_features = "bow", ft_out, ft_embedding, ft_categories, ft_emotions;
  std::size_t ft_bow_size = 400;
  TextOptions ft_text;
  feat_cmd->add_option("--dataset", ft_dataset, "TSV label<TAB>text")->required();
  feat_cmd->add_option("--features", ft_features,
                       "bow|categories|emotions|pad-concat|<embedding label>")
      ->capture_default_str();
  feat_cmd->add_option("--out", ft_out, "Output TSV (label + features)")->required();
  feat_cmd->add_option("--embedding", ft_embedding, "Embedding file for embedding features");
  feat_cmd->add_option("--categories", ft_categories, "Category lexicon (.dic)");
  feat_cmd->add_option("--emotions", ft_emotions, "Emotion lexicon (TSV)");
  feat_cmd->add_option("--bow-size", ft_bow_size)->capture_default_str();
  ft_text.add_flags(feat_cmd);

  // ---- evaluate ---------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate", "Repeated split/train/test experiments");
  std::string ev_dataset, ev_features = "bow", ev_out, ev_embedding, ev_categories, ev_emotions;
  std::string ev_format = "both", ev_save_model;
  ExperimentConfig ev_cfg;
  bool ev_no_scale = false;
  TextOptions ev_text;
  eval_cmd->add_option("--dataset", ev_dataset)->required();
  eval_cmd->add_option("--features", ev_features,
                       "bow|categories|emotions|pad-concat|<embedding label>")
      ->capture_default_str();
  eval_cmd->add_option("--model", ev_cfg.feature_name, "placeholder")->group("");  // replaced below
  eval_cmd->remove_option(eval_cmd->get_option("--model"));
  std::string ev_model = "lsvm";
  eval_cmd->add_option("--model", ev_model, "nb|lr|lsvm|rsvm")->capture_default_str();
  eval_cmd->add_option("--out", ev_out, "Output directory")->required();
  eval_cmd->add_option("--embedding", ev_embedding);
  eval_cmd->add_option("--categories", ev_categories);
  eval_cmd->add_option("--emotions", ev_emotions);
  eval_cmd->add_option("--runs", ev_cfg.repetitions)->capture_default_str();
  eval_cmd->add_option("--seed", ev_cfg.master_seed)->capture_default_str();
  eval_cmd->add_option("--train-frac", ev_cfg.train_fraction)->capture_default_str();
  eval_cmd->add_option("--folds", ev_cfg.cv_folds)->capture_default_str();
  eval_cmd->add_option("--bow-size", ev_cfg.bow_size)->capture_default_str();
  eval_cmd->add_flag("--no-scale", ev_no_scale, "Skip min-max feature scaling");
  eval_cmd->add_option("--workers", ev_cfg.workers, "Parallel runs (1 = deterministic)")
      ->capture_default_str();
  eval_cmd->add_option("--format", ev_format, "json|table|both")->capture_default_str();
  eval_cmd->add_option("--save-last-model", ev_save_model, "Write the final run's refit model");
  eval_cmd->add_option("--svm-tol", ev_cfg.solver.svm_tol)->capture_default_str();
  eval_cmd->add_option("--svm-cache-mb", ev_cfg.solver.svm_cache_mb)->capture_default_str();
  eval_cmd->add_option("--lr-max-iter", ev_cfg.solver.logreg_max_iter)->capture_default_str();
  eval_cmd->add_option("--lsvm-max-iter", ev_cfg.solver.lsvm_max_iter)->capture_default_str();
  ev_text.add_flags(eval_cmd);

  // ---- ablation-suite -----------------------------------------------------------
  auto* abl_cmd = app.add_subcommand("ablation-suite",
                                     "Compare embedding feature spaces under shared splits");
  std::string ab_dataset, ab_te, ab_de, ab_out, ab_model = "lsvm";
  AblationConfig ab_cfg;
  bool ab_no_centroids = false, ab_no_aaeme = false;
  TextOptions ab_text;
  abl_cmd->add_option("--dataset", ab_dataset)->required();
  abl_cmd->add_option("--te", ab_te, "General (source) embedding")->required();
  abl_cmd->add_option("--de", ab_de, "Domain (target) embedding")->required();
  abl_cmd->add_option("--out", ab_out, "Output directory")->required();
  abl_cmd->add_option("--model", ab_model, "nb|lr|lsvm|rsvm")->capture_default_str();
  abl_cmd->add_option("--runs", ab_cfg.experiment.repetitions)->capture_default_str();
  abl_cmd->add_option("--seed", ab_cfg.experiment.master_seed)->capture_default_str();
  abl_cmd->add_option("--folds", ab_cfg.experiment.cv_folds)->capture_default_str();
  abl_cmd->add_option("--workers", ab_cfg.experiment.workers)->capture_default_str();
  abl_cmd->add_option("--hidden", ab_cfg.mapper.hidden_units)->capture_default_str();
  abl_cmd->add_option("--epochs", ab_cfg.mapper.epochs)->capture_default_str();
  abl_cmd->add_option("--lr", ab_cfg.mapper.learning_rate)->capture_default_str();
  abl_cmd->add_option("--mapper-seed", ab_cfg.mapper.seed)->capture_default_str();
  abl_cmd->add_option("--k-near", ab_cfg.centroid.k_near)->capture_default_str();
  abl_cmd->add_option("--k-far", ab_cfg.centroid.k_far)->capture_default_str();
  abl_cmd->add_option("--far-weight", ab_cfg.centroid.far_weight)->capture_default_str();
  abl_cmd->add_flag("--no-centroids", ab_no_centroids);
  abl_cmd->add_flag("--no-aaeme", ab_no_aaeme);
  ab_text.add_flags(abl_cmd);

  // ---- profile-dataset ---------------------------------------------------------
  auto* prof_cmd = app.add_subcommand("profile-dataset",
                                      "Per-category mean percentages for a dataset subset");
  std::string pf_dataset, pf_categories, pf_out, pf_subset = "all";
  TextOptions pf_text;
  prof_cmd->add_option("--dataset", pf_dataset)->required();
  prof_cmd->add_option("--categories", pf_categories, "Category lexicon (.dic)")->required();
  prof_cmd->add_option("--subset", pf_subset, "all|0|1 (label filter)")->capture_default_str();
  prof_cmd->add_option("--out", pf_out, "Output file (default: stdout)");
  pf_text.add_flags(prof_cmd);

  // ---- pca-export ----------------------------------------------------------------
  auto* pca_cmd = app.add_subcommand("pca-export",
                                     "2-D PCA projection of labelled word lists");
  std::string pc_embedding, pc_out;
  std::vector<std::string> pc_lists;
  pca_cmd->add_option("--embedding", pc_embedding)->required();
  pca_cmd->add_option("--wordlist", pc_lists, "NAME=FILE, repeatable")->required();
  pca_cmd->add_option("--out", pc_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd)
      return cmd_train_embedding(corpus_path, train_out, sgns_cfg, train_binary, train_text);

    if (*map_cmd) {
      Embedding source = load_embedding_auto(map_source);
      Embedding target = load_embedding_auto(map_target);
      if (map_linear) {
        save_mapper(train_linear_mapper(source, target), map_out);
      } else {
        MapperTrainLog log;
        MlpMapper mapper = train_mapper(source, target, map_cfg, &log);
        std::cerr << "mapper: " << log.epochs_run << " epochs, loss " << log.initial_loss
                  << " -> " << (log.epoch_losses.empty() ? log.initial_loss : log.epoch_losses.back())
                  << "\n";
        save_mapper(mapper, map_out);
      }
      return 0;
    }

    if (*centroid_cmd) {
      Embedding source = load_embedding_auto(cen_source);
      Embedding target = load_embedding_auto(cen_target);
      cen_ccfg.variant = cen_variant == 2 ? CentroidVariant::kCentroid2 : CentroidVariant::kCentroid1;
      MapperTrainLog log;
      MlpMapper mapper = train_centroid_mapper(source, target, cen_cfg, cen_ccfg, &log);
      std::cerr << "centroid mapper: " << log.epochs_run << " epochs\n";
      save_mapper(mapper, cen_out);
      return 0;
    }

    if (*ate_cmd) {
      Embedding source = load_embedding_auto(ate_source);
      Embedding copy;
      const Embedding* copy_ptr = nullptr;
      if (!ate_copy.empty()) {
        copy = load_embedding_auto(ate_copy);
        copy_ptr = &copy;
      }
      Embedding ate = checkpoint_is_linear_mapper(ate_mapper)
                          ? build_ate(source, load_linear_mapper(ate_mapper), copy_ptr)
                          : build_ate(source, load_mlp_mapper(ate_mapper), copy_ptr);
      save_embedding(ate, ate_out, ate_binary);
      return 0;
    }

    if (*partial_cmd) {
      Embedding source = load_embedding_auto(par_source);
      Embedding target = load_embedding_auto(par_target);
      MlpMapper mapper = load_mlp_mapper(par_mapper);
      save_embedding(build_partial_adjusted(source, target, mapper), par_out, par_binary);
      return 0;
    }

    if (*aaeme_cmd) {
      Embedding src1 = load_embedding_auto(aa_src1);
      Embedding src2 = load_embedding_auto(aa_src2);
      AaemeTrainLog log;
      AaemeModel model = train_aaeme(src1, src2, aa_cfg, &log);
      std::cerr << "aaeme: " << log.epochs_run << " epochs, loss " << log.initial_loss << " -> "
                << (log.epoch_losses.empty() ? log.initial_loss : log.epoch_losses.back()) << "\n";
      save_aaeme(model, aa_out);
      if (!aa_emb_out.empty())
        save_embedding(build_meta_embedding(model, src1, src2), aa_emb_out, aa_binary);
      return 0;
    }

    if (*feat_cmd) {
      LabeledDataset data = load_dataset_tsv(ft_dataset);
      StopwordPolicy policy = ft_text.apply();
      ExperimentContext ctx = make_context(data, policy);
      std::string label;
      FeatureKind kind = parse_feature_kind(ft_features, !ft_embedding.empty(), &label);

      Embedding emb;
      CategoryLexicon cats;
      EmotionLexicon emos;
      if (kind == FeatureKind::kEmbeddingAvg || kind == FeatureKind::kPadConcat) {
        if (ft_embedding.empty()) throw CLI::ValidationError("--embedding is required");
        emb = load_embedding_auto(ft_embedding);
        ctx.embedding = &emb;
      }
      if (kind == FeatureKind::kCategoryLexicon) {
        if (ft_categories.empty()) throw CLI::ValidationError("--categories is required");
        cats = CategoryLexicon::load(ft_categories);
        ctx.category_lexicon = &cats;
      }
      if (kind == FeatureKind::kEmotionLexicon) {
        if (ft_emotions.empty()) throw CLI::ValidationError("--emotions is required");
        emos = EmotionLexicon::load(ft_emotions);
        ctx.emotion_lexicon = &emos;
      }

      // standalone export: featurizer artifacts are fitted on all given rows
      ExperimentConfig cfg;
      cfg.feature_kind = kind;
      cfg.bow_size = ft_bow_size;
      std::vector<std::size_t> all(data.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      Eigen::MatrixXd M;
      {
        // reuse the harness path via a single pseudo-split
        ExperimentContext& c = ctx;
        // fit + transform
        struct Local {
          static Eigen::MatrixXd build(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                                       const std::vector<std::size_t>& rows);
        };
        M = Local::build(c, cfg, all);
      }
      std::ofstream out(ft_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + ft_out);
      for (Eigen::Index r = 0; r < M.rows(); ++r) {
        out << data.labels[static_cast<std::size_t>(r)];
        for (Eigen::Index c2 = 0; c2 < M.cols(); ++c2) out << '\t' << M(r, c2);
        out << '\n';
      }
      return 0;
    }

    if (*eval_cmd) {
      ev_cfg.model = model_family_from_string(ev_model);
      ev_cfg.scale_features = !ev_no_scale;
      std::string label;
      ev_cfg.feature_kind = parse_feature_kind(ev_features, !ev_embedding.empty(), &label);
      ev_cfg.feature_name = label;

      const bool embedding_features = ev_cfg.feature_kind == FeatureKind::kEmbeddingAvg ||
                                      ev_cfg.feature_kind == FeatureKind::kPadConcat;
      if (ev_cfg.model == ModelFamily::kNaiveBayes && embedding_features && ev_no_scale)
        throw CLI::ValidationError(
            "--model nb with embedding features requires min-max scaling (drop --no-scale)");

      LabeledDataset data = load_dataset_tsv(ev_dataset);
      StopwordPolicy policy = ev_text.apply();
      ExperimentContext ctx = make_context(data, policy);

      Embedding emb;
      CategoryLexicon cats;
      EmotionLexicon emos;
      if (embedding_features) {
        if (ev_embedding.empty()) throw CLI::ValidationError("--embedding is required");
        emb = load_embedding_auto(ev_embedding);
        ctx.embedding = &emb;
      } else if (ev_cfg.feature_kind == FeatureKind::kCategoryLexicon) {
        if (ev_categories.empty()) throw CLI::ValidationError("--categories is required");
        cats = CategoryLexicon::load(ev_categories);
        ctx.category_lexicon = &cats;
      } else if (ev_cfg.feature_kind == FeatureKind::kEmotionLexicon) {
        if (ev_emotions.empty()) throw CLI::ValidationError("--emotions is required");
        emos = EmotionLexicon::load(ev_emotions);
        ctx.emotion_lexicon = &emos;
      }

      EvalReport report;
      if (!ev_save_model.empty()) {
        // run n-1 via repeat, then the last run explicitly to grab its model
        ExperimentConfig cfg = ev_cfg;
        report.feature_name = cfg.feature_name;
        report.model_name = to_string(cfg.model);
        for (std::size_t i = 0; i + 1 < cfg.repetitions; ++i)
          report.runs.push_back(run_experiment(ctx, cfg, derive_seed(cfg.master_seed, i)));
        AnyModel last;
        report.runs.push_back(
            run_experiment(ctx, cfg, derive_seed(cfg.master_seed, cfg.repetitions - 1), &last));
        report.finalize();
        save_model(last, ev_save_model);
      } else {
        report = repeat_experiments(ctx, ev_cfg);
      }

      fs::create_directories(ev_out);
      if (ev_format == "json" || ev_format == "both") {
        std::ofstream out(fs::path(ev_out) / "report.json", std::ios::binary);
        out << report_json(report);
      }
      if (ev_format == "table" || ev_format == "both") {
        std::ofstream out(fs::path(ev_out) / "report.txt", std::ios::binary);
        out << report_table({report});
      }
      echo_config(app, ev_out);
      std::cout << report_table({report});
      return 0;
    }

    if (*abl_cmd) {
      ab_cfg.experiment.model = model_family_from_string(ab_model);
      ab_cfg.include_centroids = !ab_no_centroids;
      ab_cfg.include_aaeme = !ab_no_aaeme;
      LabeledDataset data = load_dataset_tsv(ab_dataset);
      StopwordPolicy policy = ab_text.apply();
      Embedding te = load_embedding_auto(ab_te);
      Embedding de = load_embedding_auto(ab_de);

      AblationResult result = ablation_suite(data, policy, te, de, ab_cfg);

      fs::create_directories(ab_out);
      {
        std::ofstream out(fs::path(ab_out) / "ablation.json", std::ios::binary);
        out << "[\n";
        for (std::size_t i = 0; i < result.reports.size(); ++i) {
          std::string j = report_json(result.reports[i]);
          j.pop_back();  // newline
          out << j << (i + 1 < result.reports.size() ? ",\n" : "\n");
        }
        out << "]\n";
      }
      {
        std::ofstream out(fs::path(ab_out) / "ablation.txt", std::ios::binary);
        out << report_table(result.reports);
      }
      echo_config(app, ab_out);
      std::cout << report_table(result.reports);
      return 0;
    }

    if (*prof_cmd) {
      LabeledDataset data = load_dataset_tsv(pf_dataset);
      StopwordPolicy policy = pf_text.apply();
      CategoryLexicon lex = CategoryLexicon::load(pf_categories);
      PreparedTexts prepared = prepare_texts(data.texts, policy);

      std::vector<std::vector<std::string>> subset;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (pf_subset == "all" || (pf_subset == "0" && data.labels[i] == 0) ||
            (pf_subset == "1" && data.labels[i] == 1))
          subset.push_back(prepared.raw_tokens[i]);
      }
      Eigen::VectorXd profile = dataset_category_profile(subset, lex);

      std::ostringstream os;
      os << "# tweets=" << subset.size() << " subset=" << pf_subset << "\n";
      for (std::size_t c = 0; c < lex.category_count(); ++c)
        os << lex.category_names()[c] << '\t' << profile(static_cast<Eigen::Index>(c)) << "\n";
      if (pf_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream out(pf_out, std::ios::binary);
        out << os.str();
      }
      return 0;
    }

    if (*pca_cmd) {
      Embedding emb = load_embedding_auto(pc_embedding);
      std::vector<std::pair<std::string, std::vector<std::string>>> lists;
      for (const auto& spec : pc_lists) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
          throw CLI::ValidationError("--wordlist expects NAME=FILE, got " + spec);
        lists.emplace_back(spec.substr(0, eq), load_wordlist(spec.substr(eq + 1)));
      }
      ProjectionResult result = project_wordlists(emb, lists);
      if (!result.missing_words.empty())
        std::cerr << "note: " << result.missing_words.size() << " listed word(s) not in embedding\n";
      if (pc_out.empty()) {
        std::cout << projection_to_text(result);
      } else {
        std::ofstream out(pc_out, std::ios::binary);
        out << projection_to_text(result);
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
