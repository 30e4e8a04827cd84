#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "trackrec/embedding.hpp"

namespace trackrec::testing {

inline EmbeddingModel random_model(std::uint32_t vocab_size, std::uint32_t dim, std::uint32_t seed) {
  std::vector<std::string> tokens;
  for (std::uint32_t i = 0; i < vocab_size; ++i) tokens.push_back("t" + std::to_string(i));
  TrainParams params;
  params.dim = dim;
  std::mt19937 gen(seed);
  std::uniform_real_distribution<float> value(-0.6f, 0.6f);
  std::vector<float> input(vocab_size * dim), output(vocab_size * dim);
  for (auto& v : input) v = value(gen);
  for (auto& v : output) v = value(gen);
  return EmbeddingModel(Vocab::from_entries(tokens, std::vector<std::uint64_t>(vocab_size, 1)),
                        params, {}, std::move(input), std::move(output));
}

// Central differences on the float parameters. The step actually taken is
// measured after rounding to float so that it does not bias the quotient.
inline double max_relative_error(EmbeddingModel& model, TrainMode mode, std::uint32_t center,
                          const std::vector<std::uint32_t>& context,
                          const std::vector<std::uint32_t>& negatives) {
  const auto analytic = loss_and_gradient(model, mode, center, context, negatives);
  const double h = 1e-4;
  double worst = 0.0;
  auto check_matrix = [&](std::vector<float>& matrix,
                          const std::map<std::uint32_t, std::vector<double>>& grads) {
    for (std::uint32_t row = 0; row < model.size(); ++row) {
      for (std::size_t d = 0; d < model.dim(); ++d) {
        float& p = matrix[row * model.dim() + d];
        const float original = p;
        p = static_cast<float>(original + h);
        const double plus_at = p;
        const double plus = loss_and_gradient(model, mode, center, context, negatives).loss;
        p = static_cast<float>(original - h);
        const double minus_at = p;
        const double minus = loss_and_gradient(model, mode, center, context, negatives).loss;
        p = original;
        const double numeric = (plus - minus) / (plus_at - minus_at);
        auto it = grads.find(row);
        const double exact = it == grads.end() ? 0.0 : it->second[d];
        const double scale = std::max(std::abs(exact), std::abs(numeric));
        if (scale < 1e-10) continue;  // untouched parameter
        worst = std::max(worst, std::abs(exact - numeric) / scale);
      }
    }
  };
  check_matrix(model.input_matrix(), analytic.input);
  check_matrix(model.output_matrix(), analytic.output);
  return worst;
}

// Mean intra-cluster minus mean inter-cluster cosine over all vocab pairs.
inline double cluster_separation(const EmbeddingModel& model,
                                 const std::map<std::string, std::uint32_t>& cluster_of) {
  double intra = 0, inter = 0;
  std::size_t n_intra = 0, n_inter = 0;
  for (std::uint32_t a = 0; a < model.size(); ++a) {
    for (std::uint32_t b = a + 1; b < model.size(); ++b) {
      const double c = cosine(model.input_row(a), model.input_row(b));
      if (cluster_of.at(model.vocab().token(a)) == cluster_of.at(model.vocab().token(b))) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  return intra / static_cast<double>(n_intra) - inter / static_cast<double>(n_inter);
}

}  // namespace trackrec::testing
