#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "limers/dataset.hpp"
#include "limers/recommender.hpp"

namespace limers {

// Top-N accuracy at a fixed cutoff, averaged over users with at least one
// held-out transaction (binarized relevance).
struct RankMetrics {
    double ndcg = 0.0;
    double recall = 0.0;
    double hit_rate = 0.0;
    double precision = 0.0;
    double map = 0.0;
    double mrr = 0.0;
    int users_evaluated = 0;
    int users_skipped = 0;  // users whose test set is empty
};

RankMetrics rank_metrics(const std::vector<RecommendationList>& lists,
                         const InteractionDataset& test, int cutoff);

// One recommendation list per user index, excluding each user's training
// profile; parallel over users, deterministic output.
std::vector<RecommendationList> top_n_lists(const Recommender& model,
                                            const std::vector<std::vector<std::int32_t>>& profiles,
                                            int n, int workers);

struct GridSearchResult {
    Hyperparams best;
    double best_metric = 0.0;
    std::vector<std::pair<Hyperparams, double>> evaluated;  // grid order
    std::vector<std::pair<Hyperparams, std::string>> failures;
};

std::string hyperparams_to_string(const Hyperparams& hp);

// Exhaustive nDCG@cutoff evaluation of every configuration; ties keep the
// earliest grid entry. Configurations that fail to train are recorded and
// skipped; if all fail, throws.
GridSearchResult grid_search(RecKind kind, const InteractionDataset& train,
                             const ItemFeatureCatalog& catalog, const InteractionDataset& valid,
                             const std::vector<Hyperparams>& grid, int cutoff,
                             std::uint64_t train_seed, int workers);

}  // namespace limers
