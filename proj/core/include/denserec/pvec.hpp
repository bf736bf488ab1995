#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "denserec/corpus.hpp"
#include "denserec/embedding.hpp"
#include "denserec/matrix.hpp"
#include "denserec/rng.hpp"

namespace denserec {

struct PvConfig {
  std::size_t dim = 300;
  std::size_t epochs = 10;
  std::size_t negatives = 30;  // noise examples per positive
  std::size_t window = 5;      // context radius in tokens
  double lr_start = 0.025;
  double lr_end = 0.0001;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Distributed-memory paragraph vectors. The hidden vector is the mean of
/// the paragraph vector and the context word vectors; the center word is
/// predicted against negative-sampled noise words. Word vectors stay at
/// their random initialization throughout training; only paragraph vectors
/// and output rows receive gradients.
struct PvModel {
  PvConfig config;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::size_t>> doc_tokens;  // vocabulary indices, in order
  Matrix word_vectors;        // |V| x dim, frozen
  Matrix paragraph_vectors;   // |docs| x dim, trained
  Matrix output_weights;      // |V| x dim, trained
  std::vector<double> noise_cdf;  // cumulative unigram^0.75 distribution
};

/// One training event: a (document, center word) pair with its fixed-window
/// context and the drawn noise words. Losses and gradients are pure
/// functions of (model, sample), which is what makes finite-difference
/// checking possible.
struct PvStepSample {
  std::size_t doc = 0;
  std::size_t center_word = 0;
  std::vector<std::size_t> context_words;
  std::vector<std::size_t> negative_words;
};

struct PvStepGradients {
  std::vector<double> paragraph;  // d(loss)/d(paragraph_vectors[doc])
  std::vector<std::pair<std::size_t, std::vector<double>>> output_rows;
};

PvModel pv_init_model(const Corpus& corpus, const PvConfig& config);

/// Draws one vocabulary index from the unigram^0.75 noise distribution.
std::size_t pv_draw_noise(const PvModel& model, Rng& rng);

/// Assembles the sample for (doc, center position): fixed-radius context
/// (truncated at document edges, center excluded) and `negatives` noise
/// draws, redrawing any draw equal to the center word.
PvStepSample pv_draw_step(const PvModel& model, std::size_t doc_index,
                          std::size_t center_position, Rng& rng);

double pv_step_loss(const PvModel& model, const PvStepSample& sample);

PvStepGradients pv_step_gradients(const PvModel& model, const PvStepSample& sample);

/// Applies one SGD step (all gradients evaluated at the pre-update
/// parameters) and returns the pre-update loss.
double pv_apply_step(PvModel& model, const PvStepSample& sample, double lr);

double pv_train_step(PvModel& model, std::size_t doc_index, std::size_t center_position,
                     Rng& rng, double lr);

/// Runs `config.epochs` passes over all (document, center) pairs in a
/// seeded shuffled order with a linear learning-rate decay. If `progress`
/// is given, emits one `epoch,step,mean_loss` line per epoch. Throws if any
/// touched parameter turns non-finite, naming the step index.
void pv_train(PvModel& model, const PvConfig& config, std::ostream* progress = nullptr);

/// Paragraph vectors as an embedding matrix, rows in corpus document order.
EmbeddingMatrix pv_export_vectors(const PvModel& model);

}  // namespace denserec
