#include "denserec/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "denserec/recommend.hpp"
#include "denserec/rng.hpp"

namespace denserec {

void EvalConfig::validate() const {
  if (folds < 2) throw std::invalid_argument("eval: folds must be >= 2");
  gmm.validate();
}

std::vector<FoldSplit> kfold_split(const UserProfile& profile, std::size_t folds,
                                   std::uint64_t seed) {
  const std::size_t n = profile.doc_ids.size();
  if (n < folds) {
    throw std::invalid_argument("kfold_split: profile smaller than fold count");
  }
  std::vector<std::string> ids = profile.doc_ids;
  Rng rng(seed);
  rng.shuffle(ids);

  const std::size_t base = n / folds;
  const std::size_t extra = n % folds;  // first `extra` blocks get one more
  std::vector<FoldSplit> splits(folds);
  std::size_t offset = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    FoldSplit& split = splits[f];
    split.validation_ids.assign(ids.begin() + offset, ids.begin() + offset + size);
    split.train_ids.reserve(n - size);
    split.train_ids.insert(split.train_ids.end(), ids.begin(), ids.begin() + offset);
    split.train_ids.insert(split.train_ids.end(), ids.begin() + offset + size, ids.end());
    offset += size;
  }
  return splits;
}

UserEvalResult evaluate_user(const UserProfile& profile, const EmbeddingMatrix& embeddings,
                             const EvalConfig& config) {
  config.validate();
  UserEvalResult result;
  result.user_id = profile.user_id;

  const std::uint64_t user_seed = config.seed ^ fnv1a64(profile.user_id);
  if (profile.doc_ids.size() < config.folds) {
    result.skipped = true;
    result.skip_reason = "profile smaller than fold count";
    return result;
  }

  const auto index = embedding_index(embeddings);
  for (const std::string& id : profile.doc_ids) {
    if (!index.count(id)) {
      result.skipped = true;
      result.skip_reason = "profile document missing from embeddings: " + id;
      return result;
    }
  }

  const std::vector<FoldSplit> splits = kfold_split(profile, config.folds, user_seed);
  for (std::size_t f = 0; f < splits.size(); ++f) {
    const FoldSplit& split = splits[f];
    if (split.train_ids.size() < config.gmm.k) {
      result.skipped = true;
      result.skip_reason = "training fold smaller than gmm component count";
      return result;
    }

    Matrix train(split.train_ids.size(), embeddings.dim());
    for (std::size_t i = 0; i < split.train_ids.size(); ++i) {
      const double* src = embeddings.vectors.row(index.at(split.train_ids[i]));
      std::copy(src, src + embeddings.dim(), train.row(i));
    }

    const std::uint64_t fold_seed = mix_seed(user_seed, f);
    GmmConfig gmm_config = config.gmm;
    gmm_config.seed = mix_seed(fold_seed, 1);
    const GmmModel model = fit_gmm(train, gmm_config);

    std::unordered_set<std::string> excluded;
    if (config.exclude_train) {
      excluded.insert(split.train_ids.begin(), split.train_ids.end());
    }
    const std::unordered_set<std::string> validation(split.validation_ids.begin(),
                                                     split.validation_ids.end());

    const std::vector<Recommendation> recs = recommend(
        model, embeddings, split.validation_ids.size(), excluded, mix_seed(fold_seed, 2));
    for (const Recommendation& rec : recs) {
      ++result.trials;
      if (validation.count(rec.doc_id)) ++result.hits;
    }
  }
  return result;
}

EvalReport evaluate_all(const std::vector<UserProfile>& profiles,
                        const EmbeddingMatrix& embeddings, const EvalConfig& config) {
  EvalReport report;
  report.method = config.method;
  for (const UserProfile& profile : profiles) {
    UserEvalResult result = evaluate_user(profile, embeddings, config);
    if (result.skipped) {
      report.skipped.push_back(std::move(result));
      continue;
    }
    report.total_hits += result.hits;
    report.total_trials += result.trials;
    report.per_user.push_back(std::move(result));
  }
  if (report.per_user.empty()) {
    throw std::runtime_error("evaluate_all: no evaluable user profiles");
  }
  report.hit_rate =
      static_cast<double>(report.total_hits) / static_cast<double>(report.total_trials);
  return report;
}

double random_baseline(const std::vector<UserProfile>& profiles, std::size_t corpus_size,
                       std::size_t folds) {
  if (corpus_size < 1) throw std::invalid_argument("random_baseline: empty corpus");
  double expected_hits = 0.0;
  double total_trials = 0.0;
  for (const UserProfile& profile : profiles) {
    const std::size_t n = profile.doc_ids.size();
    const std::size_t base = n / folds;
    const std::size_t extra = n % folds;
    for (std::size_t f = 0; f < folds; ++f) {
      const double dv = static_cast<double>(base + (f < extra ? 1 : 0));
      expected_hits += dv * (dv / static_cast<double>(corpus_size));
      total_trials += dv;
    }
  }
  if (total_trials == 0.0) return 0.0;
  return expected_hits / total_trials;
}

std::string format_hit_rate(std::size_t hits, std::size_t trials) {
  const double rate =
      trials == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(trials);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f %%", rate);
  return buf;
}

std::string render_report_table(const std::vector<EvalReport>& reports) {
  std::size_t method_width = std::string("Method").size();
  for (const EvalReport& r : reports) method_width = std::max(method_width, r.method.size());

  std::ostringstream out;
  out << std::string(method_width, '-') << "-+----------+------------\n";
  auto row = [&](const std::string& method, const std::string& rate, const std::string& hits) {
    out << method << std::string(method_width - method.size(), ' ') << " | " << rate << " | "
        << hits << "\n";
  };
  row("Method", "Hit rate", "Hits");
  out << std::string(method_width, '-') << "-+----------+------------\n";
  for (const EvalReport& r : reports) {
    std::ostringstream hits;
    hits << r.total_hits << " / " << r.total_trials;
    std::string rate = format_hit_rate(r.total_hits, r.total_trials);
    if (rate.size() < 8) rate = std::string(8 - rate.size(), ' ') + rate;
    row(r.method, rate, hits.str());
  }
  out << std::string(method_width, '-') << "-+----------+------------\n";
  return out.str();
}

std::string report_to_json(const EvalReport& report, double baseline) {
  std::ostringstream out;
  out << "{\"method\":\"" << report.method << "\",\"hit_rate\":" << format_g17(report.hit_rate)
      << ",\"total_hits\":" << report.total_hits << ",\"total_trials\":" << report.total_trials
      << ",\"random_baseline\":" << format_g17(baseline) << ",\"per_user\":[";
  for (std::size_t i = 0; i < report.per_user.size(); ++i) {
    const UserEvalResult& u = report.per_user[i];
    if (i) out << ',';
    out << "{\"user_id\":\"" << u.user_id << "\",\"hits\":" << u.hits
        << ",\"trials\":" << u.trials << "}";
  }
  out << "],\"skipped\":[";
  for (std::size_t i = 0; i < report.skipped.size(); ++i) {
    const UserEvalResult& u = report.skipped[i];
    if (i) out << ',';
    out << "{\"user_id\":\"" << u.user_id << "\",\"reason\":\"" << u.skip_reason << "\"}";
  }
  out << "]}";
  return out.str();
}

}  // namespace denserec
