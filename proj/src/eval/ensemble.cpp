/* Copyright 2026 The ascnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <numeric>

#include "common/error.hpp"
#include "eval/eval.hpp"

namespace ascnet::eval {

double disagreement(std::span<const Distribution> a, std::span<const Distribution> b) {
  require(a.size() == b.size() && !a.empty(), ErrorCode::kAlignment,
          "disagreement: prediction lists differ in length or are empty");
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += argmax(a[i]) != argmax(b[i]);
  return static_cast<double>(differ) / static_cast<double>(a.size());
}

namespace {

double mean_pairwise(const std::vector<std::size_t>& set,
                     const std::vector<std::vector<double>>& d) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      sum += d[set[i]][set[j]];
      ++pairs;
    }
  }
  return pairs ? sum / static_cast<double>(pairs) : 0.0;
}

}  // namespace

EnsembleSelection select_ensemble(std::span<const Candidate> candidates, double baseline,
                                  std::size_t k) {
  require(k >= 2, ErrorCode::kArgument, "select_ensemble: k must be at least 2");
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].accuracy > baseline) eligible.push_back(i);
  }
  if (eligible.size() < 2) {
    fail(ErrorCode::kSelection,
         "select_ensemble: " + std::to_string(eligible.size()) +
             " candidate(s) above the baseline, at least 2 required");
  }
  // Rank order: accuracy descending, then name.
  auto better = [&](std::size_t a, std::size_t b) {
    if (candidates[a].accuracy != candidates[b].accuracy) {
      return candidates[a].accuracy > candidates[b].accuracy;
    }
    return candidates[a].name < candidates[b].name;
  };
  std::sort(eligible.begin(), eligible.end(), better);

  const std::size_t n = candidates.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    for (std::size_t j = i + 1; j < eligible.size(); ++j) {
      const std::size_t a = eligible[i], b = eligible[j];
      d[a][b] = d[b][a] = disagreement(candidates[a].predictions, candidates[b].predictions);
    }
  }

  EnsembleSelection sel;
  sel.members.push_back(eligible.front());
  std::vector<bool> used(n, false);
  used[eligible.front()] = true;
  const std::size_t target = std::min(k, eligible.size());
  while (sel.members.size() < target) {
    std::optional<std::size_t> pick;
    double pick_div = -1.0;
    // `eligible` is in rank order, so strict improvement keeps tie-breaks.
    for (std::size_t c : eligible) {
      if (used[c]) continue;
      auto trial = sel.members;
      trial.push_back(c);
      const double div = mean_pairwise(trial, d);
      if (!pick || div > pick_div) {
        pick = c;
        pick_div = div;
      }
    }
    sel.members.push_back(*pick);
    used[*pick] = true;
  }
  sel.diversity = mean_pairwise(sel.members, d);
  return sel;
}

}  // namespace ascnet::eval
