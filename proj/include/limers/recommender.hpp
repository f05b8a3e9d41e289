#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "limers/dataset.hpp"

namespace limers {

enum class RecKind { random, mostpop, att_item_knn, vsm };

RecKind rec_kind_from_string(const std::string& s);
std::string to_string(RecKind k);

// Free-form hyperparameters, validated per kind at train time. An ordered
// map keeps manifest serialization deterministic.
using Hyperparams = std::map<std::string, std::string>;

struct RecommendationEntry {
    std::int32_t item = 0;
    double score = 0.0;
};

struct RecommendationList {
    std::int32_t user = 0;
    std::vector<RecommendationEntry> entries;  // scores non-increasing, ties by item index
    bool short_list = false;                   // fewer candidates than requested
};

// Dense per-item genre rows (binary indicators or TF-IDF weights) plus
// their Euclidean norms. Rows are the unit of SIMD work downstream.
struct FeatureMatrix {
    std::int32_t items = 0;
    std::int32_t dim = 0;
    std::vector<double> values;  // row-major items x dim
    std::vector<double> norms;

    const double* row(std::int32_t item) const {
        return values.data() + static_cast<std::size_t>(item) * static_cast<std::size_t>(dim);
    }
};

FeatureMatrix build_feature_matrix(const ItemFeatureCatalog& catalog, bool tfidf);

// A trained black-box model. Scoring is a pure function of (user, item):
// no state is mutated, repeated calls return identical values, and a
// trained instance can be shared read-only across scoring workers.
class Recommender {
public:
    virtual ~Recommender() = default;

    RecKind kind() const { return kind_; }
    std::int32_t n_users() const { return n_users_; }
    std::int32_t n_items() const { return n_items_; }
    const Hyperparams& params() const { return params_; }

    virtual double score(std::int32_t user, std::int32_t item) const = 0;

    // True when the model has no usable training signal for this user;
    // score() then returns 0 instead of failing.
    virtual bool cold_user(std::int32_t user) const { return false; }

protected:
    Recommender(RecKind kind, std::int32_t n_users, std::int32_t n_items, Hyperparams params)
        : kind_(kind), n_users_(n_users), n_items_(n_items), params_(std::move(params)) {}

    RecKind kind_;
    std::int32_t n_users_;
    std::int32_t n_items_;
    Hyperparams params_;
};

// Trains a model of the given kind. Deterministic given (inputs, seed).
// Unknown hyperparameter names raise; an Att-Item-kNN neighborhood larger
// than the catalog is clamped with a warning recorded in params().
std::unique_ptr<Recommender> train_recommender(RecKind kind, const InteractionDataset& train,
                                               const ItemFeatureCatalog& catalog,
                                               const Hyperparams& hp, std::uint64_t seed);

// The n highest-scoring items outside `exclude` (a sorted training
// profile); ties broken by ascending item index.
RecommendationList recommend_top_n(const Recommender& model, std::int32_t user, int n,
                                   std::span<const std::int32_t> exclude);

// Default hyperparameter grids used for nDCG-driven model selection.
std::vector<Hyperparams> default_grid(RecKind kind);

}  // namespace limers
