// denserec command line front end: ingest -> embed -> reduce -> fit ->
// recommend -> evaluate -> export. Every subcommand is deterministic for a
// fixed seed and writes a manifest recording its configuration and the
// digests of all files it read and wrote.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "denserec/corpus.hpp"
#include "denserec/embedding.hpp"
#include "denserec/eval.hpp"
#include "denserec/gmm.hpp"
#include "denserec/kpca.hpp"
#include "denserec/pvec.hpp"
#include "denserec/recommend.hpp"
#include "denserec/rng.hpp"
#include "denserec/svd.hpp"
#include "denserec/synth.hpp"
#include "denserec/tfidf.hpp"

namespace fs = std::filesystem;
using namespace denserec;

namespace {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  char out[20];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return out;
}

std::string write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
  return path;
}

/// Run provenance: config values, seed, and input/output digests. Runs with
/// identical flags and inputs produce byte-identical manifests.
class Manifest {
 public:
  Manifest(std::string subcommand, std::uint64_t seed)
      : subcommand_(std::move(subcommand)), seed_(seed) {}

  void config(const std::string& key, const std::string& value) { config_[key] = value; }
  void config(const std::string& key, std::uint64_t value) {
    config_[key] = std::to_string(value);
  }
  void config_real(const std::string& key, double value) { config_[key] = format_g17(value); }
  void input(const std::string& path) { inputs_[path] = file_digest(path); }
  void output(const std::string& path) { outputs_[path] = file_digest(path); }

  void write(const std::string& path) const {
    std::ostringstream out;
    out << "{\"subcommand\":\"" << subcommand_ << "\",\"seed\":" << seed_ << ",\"config\":{";
    bool first = true;
    for (const auto& [k, v] : config_) {
      if (!first) out << ',';
      first = false;
      out << '"' << k << "\":\"" << v << '"';
    }
    out << "},\"inputs\":{";
    first = true;
    for (const auto& [k, v] : inputs_) {
      if (!first) out << ',';
      first = false;
      out << '"' << k << "\":\"" << v << '"';
    }
    out << "},\"outputs\":{";
    first = true;
    for (const auto& [k, v] : outputs_) {
      if (!first) out << ',';
      first = false;
      out << '"' << k << "\":\"" << v << '"';
    }
    out << "}}\n";
    write_text_file(path, out.str());
  }

 private:
  std::string subcommand_;
  std::uint64_t seed_ = 0;
  std::map<std::string, std::string> config_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

std::string manifest_path_for(const std::string& out_path) {
  if (fs::is_directory(out_path)) return (fs::path(out_path) / "manifest.json").string();
  return out_path + ".manifest.json";
}

std::string sanitize_filename(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

Covariance parse_covariance(const std::string& name) {
  if (name == "diagonal") return Covariance::Diagonal;
  if (name == "spherical") return Covariance::Spherical;
  throw std::runtime_error("unknown covariance type: " + name);
}

struct PipelineFlags {
  // corpus / profiles
  std::string corpus_path;
  std::string profiles_path;
  std::uint64_t min_chars = 500;
  std::uint64_t min_docs = 50;
  // lsa
  std::uint64_t rank = 10;
  double tfidf_low = 0.3;
  double tfidf_high = 10.0;
  // pvec
  std::uint64_t dim = 300;
  std::uint64_t epochs = 10;
  std::uint64_t negatives = 30;
  std::uint64_t window = 5;
  double lr_start = 0.025;
  double lr_end = 0.0001;
  // kpca
  std::uint64_t kpca_components = 100;
  double gamma = 0.0;  // 0 = median heuristic
  // gmm
  std::uint64_t gmm_k = 2;
  std::string gmm_cov = "diagonal";
  // eval
  std::uint64_t folds = 5;
  bool exclude_train = false;
  // global
  std::uint64_t seed = 1;
  std::uint64_t threads = 1;
};

void warn_profile_drops(const ProfileLoadResult& loaded) {
  for (const ProfileWarning& w : loaded.warnings) {
    std::cerr << "warning: user " << w.user_id << " references unknown document " << w.doc_id
              << " (dropped)\n";
  }
}

GmmConfig gmm_config_from(const PipelineFlags& flags) {
  GmmConfig config;
  config.k = flags.gmm_k;
  config.covariance = parse_covariance(flags.gmm_cov);
  config.seed = flags.seed;
  return config;
}

EmbeddingMatrix compute_lsa_embeddings(const Corpus& corpus, const PipelineFlags& flags) {
  const TfIdfModel tfidf = fit_tfidf(corpus, flags.tfidf_low, flags.tfidf_high);
  const EmbeddingMatrix weighted = transform_tfidf(tfidf, corpus);
  const std::size_t rank =
      std::min<std::size_t>(flags.rank, std::min(weighted.vectors.rows, weighted.vectors.cols));
  if (rank < flags.rank) {
    std::cerr << "note: svd rank capped at " << rank << " by the input size\n";
  }
  const SvdModel svd = fit_svd(weighted, rank, flags.seed);
  return project_svd(svd, weighted);
}

EmbeddingMatrix compute_pv_embeddings(const Corpus& corpus, const PipelineFlags& flags,
                                      bool reduce_kpca) {
  PvConfig config;
  config.dim = flags.dim;
  config.epochs = flags.epochs;
  config.negatives = flags.negatives;
  config.window = flags.window;
  config.lr_start = flags.lr_start;
  config.lr_end = flags.lr_end;
  config.seed = flags.seed;
  PvModel model = pv_init_model(corpus, config);
  pv_train(model, config, &std::cerr);
  EmbeddingMatrix emb = pv_export_vectors(model);
  if (!reduce_kpca) return emb;

  std::size_t components = flags.kpca_components;
  if (components >= emb.size()) {
    components = emb.size() - 1;
    std::cerr << "note: kpca components capped at " << components << " by the corpus size\n";
  }
  std::optional<double> gamma;
  if (flags.gamma > 0.0) gamma = flags.gamma;
  const KpcaModel kpca = fit_kpca(emb, components, gamma, flags.seed);
  if (kpca.components() < components) {
    std::cerr << "note: kpca kept " << kpca.components() << " of " << components
              << " components (near-zero eigenvalues dropped)\n";
  }
  return project_kpca(kpca, emb);
}

// --- subcommands ---------------------------------------------------------

int cmd_synth(const SynthConfig& config, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const SynthData data = synth_corpus(config);
  const std::string corpus_path = (fs::path(out_dir) / "corpus.jsonl").string();
  const std::string profiles_path = (fs::path(out_dir) / "profiles.jsonl").string();
  write_synth_files(data, corpus_path, profiles_path);

  Manifest manifest("synth", config.seed);
  manifest.config("topics", config.topics);
  manifest.config("docs_per_topic", config.docs_per_topic);
  manifest.config("users", config.users);
  manifest.config("docs_per_user", config.docs_per_user);
  manifest.config("topics_per_user", config.topics_per_user);
  manifest.output(corpus_path);
  manifest.output(profiles_path);
  manifest.write((fs::path(out_dir) / "manifest.json").string());

  std::cout << "wrote " << data.documents.size() << " documents and " << data.profiles.size()
            << " profiles to " << out_dir << "\n";
  return 0;
}

int cmd_ingest(const PipelineFlags& flags, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const Corpus corpus = load_corpus(flags.corpus_path, flags.min_chars);
  if (corpus.size() == 0) throw std::runtime_error("ingest: no documents pass the filter");
  const ProfileLoadResult loaded =
      load_profiles(flags.profiles_path, corpus, flags.min_docs);
  warn_profile_drops(loaded);

  const std::string corpus_path = (fs::path(out_dir) / "corpus.jsonl").string();
  const std::string profiles_path = (fs::path(out_dir) / "profiles.jsonl").string();
  SynthData passthrough;
  passthrough.documents = corpus.documents;
  passthrough.profiles = loaded.profiles;
  write_synth_files(passthrough, corpus_path, profiles_path);

  Manifest manifest("ingest", flags.seed);
  manifest.config("min_chars", flags.min_chars);
  manifest.config("min_docs", flags.min_docs);
  manifest.input(flags.corpus_path);
  manifest.input(flags.profiles_path);
  manifest.output(corpus_path);
  manifest.output(profiles_path);
  manifest.write((fs::path(out_dir) / "manifest.json").string());

  std::cout << "retained " << corpus.size() << " documents (vocabulary "
            << corpus.vocab_tokens.size() << " terms), " << loaded.profiles.size()
            << " profiles; dropped " << loaded.warnings.size() << " unknown references\n";
  return 0;
}

int cmd_embed_lsa(const PipelineFlags& flags, const std::string& out_path) {
  const Corpus corpus = load_corpus(flags.corpus_path, flags.min_chars);
  const EmbeddingMatrix emb = compute_lsa_embeddings(corpus, flags);
  save_embeddings(emb, out_path);

  Manifest manifest("embed-lsa", flags.seed);
  manifest.config("rank", flags.rank);
  manifest.config_real("tfidf_low", flags.tfidf_low);
  manifest.config_real("tfidf_high", flags.tfidf_high);
  manifest.config("min_chars", flags.min_chars);
  manifest.input(flags.corpus_path);
  manifest.output(out_path);
  manifest.write(manifest_path_for(out_path));

  std::cout << "embedded " << emb.size() << " documents at dim " << emb.dim() << "\n";
  return 0;
}

int cmd_embed_pv(const PipelineFlags& flags, const std::string& out_path) {
  const Corpus corpus = load_corpus(flags.corpus_path, flags.min_chars);
  const EmbeddingMatrix emb = compute_pv_embeddings(corpus, flags, /*reduce_kpca=*/false);
  save_embeddings(emb, out_path);

  Manifest manifest("embed-pv", flags.seed);
  manifest.config("dim", flags.dim);
  manifest.config("epochs", flags.epochs);
  manifest.config("negatives", flags.negatives);
  manifest.config("window", flags.window);
  manifest.config_real("lr_start", flags.lr_start);
  manifest.config_real("lr_end", flags.lr_end);
  manifest.config("min_chars", flags.min_chars);
  manifest.input(flags.corpus_path);
  manifest.output(out_path);
  manifest.write(manifest_path_for(out_path));

  std::cout << "trained paragraph vectors for " << emb.size() << " documents at dim "
            << emb.dim() << "\n";
  return 0;
}

int cmd_reduce(const PipelineFlags& flags, const std::string& in_path,
               const std::string& out_path) {
  const EmbeddingMatrix emb = load_embeddings(in_path);
  std::size_t components = flags.kpca_components;
  if (components >= emb.size()) {
    components = emb.size() - 1;
    std::cerr << "note: kpca components capped at " << components << " by the input size\n";
  }
  std::optional<double> gamma;
  if (flags.gamma > 0.0) gamma = flags.gamma;
  const KpcaModel model = fit_kpca(emb, components, gamma, flags.seed);
  if (model.components() < components) {
    std::cerr << "note: kpca kept " << model.components() << " of " << components
              << " components (near-zero eigenvalues dropped)\n";
  }
  const EmbeddingMatrix reduced = project_kpca(model, emb);
  save_embeddings(reduced, out_path);

  Manifest manifest("reduce", flags.seed);
  manifest.config("kpca_components", flags.kpca_components);
  manifest.config_real("gamma", model.gamma);
  manifest.input(in_path);
  manifest.output(out_path);
  manifest.write(manifest_path_for(out_path));

  std::cout << "reduced " << emb.size() << " embeddings from dim " << emb.dim() << " to "
            << reduced.dim() << " (gamma " << format_g17(model.gamma) << ")\n";
  return 0;
}

int cmd_export_2d(const PipelineFlags& flags, const std::string& in_path,
                  const std::string& out_path) {
  const EmbeddingMatrix emb = load_embeddings(in_path);
  const EmbeddingMatrix projected = project_2d(emb);
  std::ostringstream out;
  out << "id,x,y\n";
  for (std::size_t i = 0; i < projected.size(); ++i) {
    out << projected.doc_ids[i] << ',' << format_g17(projected.vectors(i, 0)) << ','
        << format_g17(projected.vectors(i, 1)) << '\n';
  }
  write_text_file(out_path, out.str());

  Manifest manifest("export-2d", flags.seed);
  manifest.input(in_path);
  manifest.output(out_path);
  manifest.write(manifest_path_for(out_path));

  std::cout << "wrote 2d projection of " << projected.size() << " points to " << out_path
            << "\n";
  return 0;
}

int cmd_fit_user(const PipelineFlags& flags, const std::string& embeddings_path,
                 const std::string& user_filter, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const EmbeddingMatrix emb = load_embeddings(embeddings_path);
  std::unordered_set<std::string> known(emb.doc_ids.begin(), emb.doc_ids.end());
  const ProfileLoadResult loaded = load_profiles(flags.profiles_path, known, flags.min_docs);
  warn_profile_drops(loaded);
  const auto index = embedding_index(emb);

  Manifest manifest("fit-user", flags.seed);
  manifest.config("gmm_k", flags.gmm_k);
  manifest.config("gmm_cov", flags.gmm_cov);
  manifest.config("min_docs", flags.min_docs);
  manifest.input(embeddings_path);
  manifest.input(flags.profiles_path);

  std::size_t fitted = 0;
  for (const UserProfile& profile : loaded.profiles) {
    if (!user_filter.empty() && profile.user_id != user_filter) continue;
    Matrix points(profile.doc_ids.size(), emb.dim());
    for (std::size_t i = 0; i < profile.doc_ids.size(); ++i) {
      const double* src = emb.vectors.row(index.at(profile.doc_ids[i]));
      std::copy(src, src + emb.dim(), points.row(i));
    }
    GmmConfig config = gmm_config_from(flags);
    config.seed = flags.seed ^ fnv1a64(profile.user_id);
    if (points.rows < config.k) {
      std::cerr << "warning: skipping user " << profile.user_id << " (profile smaller than k)\n";
      continue;
    }
    const GmmModel model = fit_gmm(points, config);
    const std::string path =
        (fs::path(out_dir) / (sanitize_filename(profile.user_id) + ".json")).string();
    write_text_file(path, gmm_to_json(model) + "\n");
    manifest.output(path);
    ++fitted;
  }
  if (fitted == 0) throw std::runtime_error("fit-user: no profile matched");
  manifest.write((fs::path(out_dir) / "manifest.json").string());
  std::cout << "fitted " << fitted << " user model(s) into " << out_dir << "\n";
  return 0;
}

int cmd_recommend(const PipelineFlags& flags, const std::string& embeddings_path,
                  const std::string& model_path, const std::string& user_id,
                  std::uint64_t count, const std::string& out_path) {
  const EmbeddingMatrix emb = load_embeddings(embeddings_path);
  std::unordered_set<std::string> excluded;

  GmmModel model;
  if (!model_path.empty()) {
    std::ifstream in(model_path);
    if (!in) throw std::runtime_error("cannot open model file: " + model_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    model = gmm_from_json(buf.str());
  } else {
    if (user_id.empty()) {
      throw std::runtime_error("recommend: need either --model or --user with --profiles");
    }
    std::unordered_set<std::string> known(emb.doc_ids.begin(), emb.doc_ids.end());
    const ProfileLoadResult loaded = load_profiles(flags.profiles_path, known, 1);
    const UserProfile* profile = nullptr;
    for (const UserProfile& p : loaded.profiles) {
      if (p.user_id == user_id) {
        profile = &p;
        break;
      }
    }
    if (!profile) throw std::runtime_error("recommend: user not found: " + user_id);
    const auto index = embedding_index(emb);
    Matrix points(profile->doc_ids.size(), emb.dim());
    for (std::size_t i = 0; i < profile->doc_ids.size(); ++i) {
      const double* src = emb.vectors.row(index.at(profile->doc_ids[i]));
      std::copy(src, src + emb.dim(), points.row(i));
    }
    GmmConfig config = gmm_config_from(flags);
    config.seed = flags.seed ^ fnv1a64(profile->user_id);
    const GmmModel fitted = fit_gmm(points, config);
    model = fitted;
    if (flags.exclude_train) {
      excluded.insert(profile->doc_ids.begin(), profile->doc_ids.end());
    }
  }

  const std::vector<Recommendation> recs = recommend(model, emb, count, excluded, flags.seed);
  write_text_file(out_path, recommendations_to_csv(recs));

  Manifest manifest("recommend", flags.seed);
  manifest.config("count", count);
  manifest.config("exclude_train", std::uint64_t(flags.exclude_train ? 1 : 0));
  if (!user_id.empty()) manifest.config("user", user_id);
  manifest.input(embeddings_path);
  if (!model_path.empty()) manifest.input(model_path);
  if (!flags.profiles_path.empty() && model_path.empty()) manifest.input(flags.profiles_path);
  manifest.output(out_path);
  manifest.write(manifest_path_for(out_path));

  std::cout << "wrote " << recs.size() << " recommendations to " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const PipelineFlags& flags, const std::string& rep,
                 const std::string& out_path) {
  const Corpus corpus = load_corpus(flags.corpus_path, flags.min_chars);
  if (corpus.size() == 0) throw std::runtime_error("evaluate: no documents pass the filter");
  const ProfileLoadResult loaded = load_profiles(flags.profiles_path, corpus, flags.min_docs);
  warn_profile_drops(loaded);
  if (loaded.profiles.empty()) {
    throw std::runtime_error("evaluate: no profiles pass the filter");
  }

  std::vector<std::string> reps;
  if (rep == "both") {
    reps = {"lsa", "pvec"};
  } else {
    reps = {rep};
  }

  const double baseline = random_baseline(loaded.profiles, corpus.size(), flags.folds);
  std::vector<EvalReport> reports;
  std::ostringstream json;
  json << "{\"random_baseline\":" << format_g17(baseline) << ",\"reports\":[";
  for (std::size_t i = 0; i < reps.size(); ++i) {
    EmbeddingMatrix emb;
    EvalConfig config;
    config.folds = flags.folds;
    config.gmm = gmm_config_from(flags);
    config.seed = flags.seed;
    config.exclude_train = flags.exclude_train;
    if (reps[i] == "lsa") {
      emb = compute_lsa_embeddings(corpus, flags);
      config.method = "GMM on LSA representations";
    } else if (reps[i] == "pvec") {
      emb = compute_pv_embeddings(corpus, flags, /*reduce_kpca=*/true);
      config.method = "GMM on learned representations";
    } else {
      throw std::runtime_error("unknown representation: " + reps[i]);
    }
    const EvalReport report = evaluate_all(loaded.profiles, emb, config);
    if (i) json << ',';
    json << report_to_json(report, baseline);
    reports.push_back(report);
  }
  json << "]}\n";

  std::cout << render_report_table(reports);
  char baseline_buf[32];
  std::snprintf(baseline_buf, sizeof(baseline_buf), "%.2f %%", 100.0 * baseline);
  std::cout << "random baseline: " << baseline_buf << "\n";

  if (!out_path.empty()) {
    write_text_file(out_path, json.str());
    Manifest manifest("evaluate", flags.seed);
    manifest.config("rep", rep);
    manifest.config("folds", flags.folds);
    manifest.config("gmm_k", flags.gmm_k);
    manifest.config("gmm_cov", flags.gmm_cov);
    manifest.config("exclude_train", std::uint64_t(flags.exclude_train ? 1 : 0));
    manifest.config("rank", flags.rank);
    manifest.config("dim", flags.dim);
    manifest.config("epochs", flags.epochs);
    manifest.config("negatives", flags.negatives);
    manifest.config("window", flags.window);
    manifest.config("kpca_components", flags.kpca_components);
    manifest.config("min_chars", flags.min_chars);
    manifest.config("min_docs", flags.min_docs);
    manifest.input(flags.corpus_path);
    manifest.input(flags.profiles_path);
    manifest.output(out_path);
    manifest.write(manifest_path_for(out_path));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"content-based document recommender with density-estimated user interest"};
  app.require_subcommand(1);

  PipelineFlags flags;
  SynthConfig synth_config;
  std::string out_path;
  std::string in_path;
  std::string rep = "both";
  std::string user_id;
  std::string model_path;
  std::uint64_t count = 10;

  auto add_global = [&](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "deterministic run seed");
    cmd->add_option("--threads", flags.threads,
                    "worker threads (1 guarantees bitwise-reproducible output)");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate the seeded synthetic benchmark");
  synth->add_option("--topics", synth_config.topics, "number of disjoint topics");
  synth->add_option("--docs-per-topic", synth_config.docs_per_topic, "documents per topic");
  synth->add_option("--users", synth_config.users, "number of users");
  synth->add_option("--docs-per-user", synth_config.docs_per_user, "profile size");
  synth->add_option("--topics-per-user", synth_config.topics_per_user,
                    "topics assigned to each user");
  synth->add_option("--out", out_path, "output directory")->required();
  synth->add_option("--seed", synth_config.seed, "deterministic run seed");

  CLI::App* ingest = app.add_subcommand("ingest", "load, filter, and normalize corpus/profiles");
  ingest->add_option("--corpus", flags.corpus_path, "corpus JSONL file")->required();
  ingest->add_option("--profiles", flags.profiles_path, "profiles JSONL file")->required();
  ingest->add_option("--min-chars", flags.min_chars, "minimum raw text length");
  ingest->add_option("--min-docs", flags.min_docs, "minimum profile size");
  ingest->add_option("--out", out_path, "output directory")->required();
  add_global(ingest);

  CLI::App* embed_lsa = app.add_subcommand("embed-lsa", "tf-idf + truncated SVD embeddings");
  embed_lsa->add_option("--corpus", flags.corpus_path, "corpus JSONL file")->required();
  embed_lsa->add_option("--min-chars", flags.min_chars, "minimum raw text length");
  embed_lsa->add_option("--rank", flags.rank, "SVD target rank");
  embed_lsa->add_option("--tfidf-low", flags.tfidf_low, "term filter lower bound");
  embed_lsa->add_option("--tfidf-high", flags.tfidf_high, "term filter upper bound");
  embed_lsa->add_option("--out", out_path, "output file (.csv or EMB1)")->required();
  add_global(embed_lsa);

  CLI::App* embed_pv = app.add_subcommand("embed-pv", "train paragraph-vector embeddings");
  embed_pv->add_option("--corpus", flags.corpus_path, "corpus JSONL file")->required();
  embed_pv->add_option("--min-chars", flags.min_chars, "minimum raw text length");
  embed_pv->add_option("--dim", flags.dim, "embedding size");
  embed_pv->add_option("--epochs", flags.epochs, "training passes");
  embed_pv->add_option("--negatives", flags.negatives, "noise examples per positive");
  embed_pv->add_option("--window", flags.window, "context radius");
  embed_pv->add_option("--lr-start", flags.lr_start, "initial learning rate");
  embed_pv->add_option("--lr-end", flags.lr_end, "final learning rate");
  embed_pv->add_option("--out", out_path, "output file (.csv or EMB1)")->required();
  add_global(embed_pv);

  CLI::App* reduce = app.add_subcommand("reduce", "RBF kernel PCA reduction");
  reduce->add_option("--embeddings", in_path, "input embedding file")->required();
  reduce->add_option("--kpca-components", flags.kpca_components, "target components");
  reduce->add_option("--gamma", flags.gamma, "RBF width (0 = median heuristic)");
  reduce->add_option("--out", out_path, "output file (.csv or EMB1)")->required();
  add_global(reduce);

  CLI::App* export_2d = app.add_subcommand("export-2d", "linear 2D projection for plotting");
  export_2d->add_option("--embeddings", in_path, "input embedding file")->required();
  export_2d->add_option("--out", out_path, "output CSV (id,x,y)")->required();
  add_global(export_2d);

  CLI::App* fit_user = app.add_subcommand("fit-user", "fit per-user interest models");
  fit_user->add_option("--embeddings", in_path, "input embedding file")->required();
  fit_user->add_option("--profiles", flags.profiles_path, "profiles JSONL file")->required();
  fit_user->add_option("--user", user_id, "fit only this user");
  fit_user->add_option("--min-docs", flags.min_docs, "minimum profile size");
  fit_user->add_option("--gmm-k", flags.gmm_k, "mixture components");
  fit_user->add_option("--gmm-cov", flags.gmm_cov, "covariance type (diagonal|spherical)");
  fit_user->add_option("--out", out_path, "output directory")->required();
  add_global(fit_user);

  CLI::App* rec = app.add_subcommand("recommend", "sample a user model and snap to documents");
  rec->add_option("--embeddings", in_path, "input embedding file")->required();
  rec->add_option("--model", model_path, "GMM model JSON (skips fitting)");
  rec->add_option("--profiles", flags.profiles_path, "profiles JSONL file");
  rec->add_option("--user", user_id, "user to fit when no model is given");
  rec->add_option("--count", count, "number of recommendations");
  rec->add_option("--gmm-k", flags.gmm_k, "mixture components");
  rec->add_option("--gmm-cov", flags.gmm_cov, "covariance type (diagonal|spherical)");
  rec->add_flag("--exclude-train", flags.exclude_train,
                "exclude the user's own documents from candidates");
  rec->add_option("--out", out_path, "output CSV")->required();
  add_global(rec);

  CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validated hit-rate benchmark");
  evaluate->add_option("--corpus", flags.corpus_path, "corpus JSONL file")->required();
  evaluate->add_option("--profiles", flags.profiles_path, "profiles JSONL file")->required();
  evaluate->add_option("--rep", rep, "representation: lsa, pvec, or both")
      ->check(CLI::IsMember({"lsa", "pvec", "both"}));
  evaluate->add_option("--min-chars", flags.min_chars, "minimum raw text length");
  evaluate->add_option("--min-docs", flags.min_docs, "minimum profile size");
  evaluate->add_option("--rank", flags.rank, "LSA rank");
  evaluate->add_option("--tfidf-low", flags.tfidf_low, "term filter lower bound");
  evaluate->add_option("--tfidf-high", flags.tfidf_high, "term filter upper bound");
  evaluate->add_option("--dim", flags.dim, "paragraph vector size");
  evaluate->add_option("--epochs", flags.epochs, "training passes");
  evaluate->add_option("--negatives", flags.negatives, "noise examples per positive");
  evaluate->add_option("--window", flags.window, "context radius");
  evaluate->add_option("--lr-start", flags.lr_start, "initial learning rate");
  evaluate->add_option("--lr-end", flags.lr_end, "final learning rate");
  evaluate->add_option("--kpca-components", flags.kpca_components, "kpca target components");
  evaluate->add_option("--gamma", flags.gamma, "RBF width (0 = median heuristic)");
  evaluate->add_option("--gmm-k", flags.gmm_k, "mixture components");
  evaluate->add_option("--gmm-cov", flags.gmm_cov, "covariance type (diagonal|spherical)");
  evaluate->add_option("--folds", flags.folds, "cross-validation folds");
  evaluate->add_flag("--exclude-train", flags.exclude_train,
                     "exclude fold-training documents from candidates");
  evaluate->add_option("--out", out_path, "report JSON output");
  add_global(evaluate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_config, out_path);
    if (ingest->parsed()) return cmd_ingest(flags, out_path);
    if (embed_lsa->parsed()) return cmd_embed_lsa(flags, out_path);
    if (embed_pv->parsed()) return cmd_embed_pv(flags, out_path);
    if (reduce->parsed()) return cmd_reduce(flags, in_path, out_path);
    if (export_2d->parsed()) return cmd_export_2d(flags, in_path, out_path);
    if (fit_user->parsed()) return cmd_fit_user(flags, in_path, user_id, out_path);
    if (rec->parsed()) return cmd_recommend(flags, in_path, model_path, user_id, count, out_path);
    if (evaluate->parsed()) return cmd_evaluate(flags, rep, out_path);
  } catch (const std::exception& e) {
    std::cerr << "denserec: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
