#include "denserec/pvec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace denserec {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log(sigmoid(x)), stable for large |x|
double neg_log_sigmoid(double x) {
  if (x >= 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

// hidden vector: mean of paragraph vector and context word vectors
std::vector<double> hidden_vector(const PvModel& model, const PvStepSample& sample) {
  const std::size_t dim = model.config.dim;
  std::vector<double> h(dim);
  const double* p = model.paragraph_vectors.row(sample.doc);
  std::copy(p, p + dim, h.begin());
  for (std::size_t w : sample.context_words) {
    const double* wv = model.word_vectors.row(w);
    for (std::size_t j = 0; j < dim; ++j) h[j] += wv[j];
  }
  const double m = static_cast<double>(1 + sample.context_words.size());
  for (std::size_t j = 0; j < dim; ++j) h[j] /= m;
  return h;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

void PvConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("pvec: dim must be >= 1");
  if (epochs < 1) throw std::invalid_argument("pvec: epochs must be >= 1");
  if (negatives < 1) throw std::invalid_argument("pvec: negatives must be >= 1");
  if (window < 1) throw std::invalid_argument("pvec: window must be >= 1");
  if (!(lr_start >= lr_end) || !(lr_end > 0.0)) {
    throw std::invalid_argument("pvec: need lr_start >= lr_end > 0");
  }
}

PvModel pv_init_model(const Corpus& corpus, const PvConfig& config) {
  config.validate();
  if (corpus.vocab_tokens.empty()) throw std::invalid_argument("pv_init_model: empty vocabulary");
  if (corpus.vocab_tokens.size() < 2) {
    throw std::invalid_argument("pv_init_model: need at least 2 vocabulary words for noise draws");
  }

  PvModel model;
  model.config = config;
  const std::size_t v = corpus.vocab_tokens.size();
  const std::size_t dim = config.dim;

  model.doc_ids.reserve(corpus.size());
  model.doc_tokens.reserve(corpus.size());
  std::vector<std::size_t> unigram(v, 0);
  for (const Document& doc : corpus.documents) {
    model.doc_ids.push_back(doc.id);
    std::vector<std::size_t> ids;
    ids.reserve(doc.tokens.size());
    for (const std::string& tok : doc.tokens) {
      const std::size_t idx = corpus.vocabulary.at(tok);
      ids.push_back(idx);
      ++unigram[idx];
    }
    model.doc_tokens.push_back(std::move(ids));
  }

  Rng rng(config.seed);
  const double bound = 0.5 / static_cast<double>(dim);
  model.word_vectors = Matrix(v, dim);
  for (double& x : model.word_vectors.data) x = (rng.uniform() - 0.5) * 2.0 * bound;
  model.paragraph_vectors = Matrix(corpus.size(), dim);
  for (double& x : model.paragraph_vectors.data) x = (rng.uniform() - 0.5) * 2.0 * bound;
  model.output_weights = Matrix(v, dim, 0.0);

  model.noise_cdf.resize(v);
  double cum = 0.0;
  for (std::size_t t = 0; t < v; ++t) {
    cum += std::pow(static_cast<double>(unigram[t]), 0.75);
    model.noise_cdf[t] = cum;
  }
  if (cum <= 0.0) throw std::invalid_argument("pv_init_model: corpus has no tokens");
  for (double& x : model.noise_cdf) x /= cum;
  return model;
}

std::size_t pv_draw_noise(const PvModel& model, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(model.noise_cdf.begin(), model.noise_cdf.end(), u);
  if (it == model.noise_cdf.end()) return model.noise_cdf.size() - 1;
  return static_cast<std::size_t>(it - model.noise_cdf.begin());
}

PvStepSample pv_draw_step(const PvModel& model, std::size_t doc_index,
                          std::size_t center_position, Rng& rng) {
  const std::vector<std::size_t>& tokens = model.doc_tokens.at(doc_index);
  if (center_position >= tokens.size()) {
    throw std::invalid_argument("pv_draw_step: center position out of range");
  }
  PvStepSample sample;
  sample.doc = doc_index;
  sample.center_word = tokens[center_position];

  const std::size_t window = model.config.window;
  const std::size_t lo = center_position >= window ? center_position - window : 0;
  const std::size_t hi = std::min(tokens.size(), center_position + window + 1);
  for (std::size_t pos = lo; pos < hi; ++pos) {
    if (pos != center_position) sample.context_words.push_back(tokens[pos]);
  }

  sample.negative_words.reserve(model.config.negatives);
  while (sample.negative_words.size() < model.config.negatives) {
    const std::size_t draw = pv_draw_noise(model, rng);
    if (draw == sample.center_word) continue;  // redraw collisions with the target
    sample.negative_words.push_back(draw);
  }
  return sample;
}

double pv_step_loss(const PvModel& model, const PvStepSample& sample) {
  const std::size_t dim = model.config.dim;
  const std::vector<double> h = hidden_vector(model, sample);
  double loss = neg_log_sigmoid(dot(model.output_weights.row(sample.center_word), h.data(), dim));
  for (std::size_t neg : sample.negative_words) {
    loss += neg_log_sigmoid(-dot(model.output_weights.row(neg), h.data(), dim));
  }
  return loss;
}

PvStepGradients pv_step_gradients(const PvModel& model, const PvStepSample& sample) {
  const std::size_t dim = model.config.dim;
  const std::vector<double> h = hidden_vector(model, sample);

  // d(loss)/d(score): sigmoid(s) - 1 for the positive, sigmoid(s) for noise
  std::map<std::size_t, double> score_grads;
  score_grads[sample.center_word] +=
      sigmoid(dot(model.output_weights.row(sample.center_word), h.data(), dim)) - 1.0;
  for (std::size_t neg : sample.negative_words) {
    score_grads[neg] += sigmoid(dot(model.output_weights.row(neg), h.data(), dim));
  }

  PvStepGradients grads;
  std::vector<double> grad_h(dim, 0.0);
  grads.output_rows.reserve(score_grads.size());
  for (const auto& [word, g] : score_grads) {
    const double* u = model.output_weights.row(word);
    std::vector<double> grad_row(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      grad_row[j] = g * h[j];
      grad_h[j] += g * u[j];
    }
    grads.output_rows.emplace_back(word, std::move(grad_row));
  }

  // h averages (1 + |context|) inputs, so the paragraph share is 1/m
  const double m = static_cast<double>(1 + sample.context_words.size());
  grads.paragraph.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) grads.paragraph[j] = grad_h[j] / m;
  return grads;
}

double pv_apply_step(PvModel& model, const PvStepSample& sample, double lr) {
  const double loss = pv_step_loss(model, sample);
  const PvStepGradients grads = pv_step_gradients(model, sample);
  const std::size_t dim = model.config.dim;
  double* p = model.paragraph_vectors.row(sample.doc);
  for (std::size_t j = 0; j < dim; ++j) p[j] -= lr * grads.paragraph[j];
  for (const auto& [word, grad_row] : grads.output_rows) {
    double* u = model.output_weights.row(word);
    for (std::size_t j = 0; j < dim; ++j) u[j] -= lr * grad_row[j];
  }
  return loss;
}

double pv_train_step(PvModel& model, std::size_t doc_index, std::size_t center_position,
                     Rng& rng, double lr) {
  const PvStepSample sample = pv_draw_step(model, doc_index, center_position, rng);
  return pv_apply_step(model, sample, lr);
}

void pv_train(PvModel& model, const PvConfig& config, std::ostream* progress) {
  config.validate();

  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (doc, center position)
  for (std::size_t d = 0; d < model.doc_tokens.size(); ++d) {
    for (std::size_t pos = 0; pos < model.doc_tokens[d].size(); ++pos) {
      pairs.emplace_back(d, pos);
    }
  }
  const std::size_t total_steps = pairs.size() * config.epochs;
  if (total_steps == 0) return;

  Rng rng(mix_seed(config.seed, 0x7261696e));
  const std::size_t dim = model.config.dim;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(pairs);
    double epoch_loss = 0.0;
    for (const auto& [doc, pos] : pairs) {
      const double frac = total_steps > 1
                              ? static_cast<double>(step) / static_cast<double>(total_steps - 1)
                              : 0.0;
      const double lr = config.lr_start + (config.lr_end - config.lr_start) * frac;
      const PvStepSample sample = pv_draw_step(model, doc, pos, rng);
      const double loss = pv_apply_step(model, sample, lr);
      epoch_loss += loss;

      bool finite = std::isfinite(loss);
      const double* p = model.paragraph_vectors.row(doc);
      for (std::size_t j = 0; finite && j < dim; ++j) finite = std::isfinite(p[j]);
      if (!finite) {
        throw std::runtime_error("pv_train: non-finite parameter at step " +
                                 std::to_string(step));
      }
      ++step;
    }
    if (progress) {
      *progress << epoch << ',' << step << ','
                << epoch_loss / static_cast<double>(pairs.size()) << '\n';
    }
  }
}

EmbeddingMatrix pv_export_vectors(const PvModel& model) {
  EmbeddingMatrix emb;
  emb.doc_ids = model.doc_ids;
  emb.vectors = model.paragraph_vectors;
  return emb;
}

}  // namespace denserec
