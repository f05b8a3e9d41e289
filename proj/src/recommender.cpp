#include "limers/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <stdexcept>

#include "limers/kernels.hpp"
#include "limers/rng.hpp"
#include "limers/text.hpp"

namespace limers {

namespace {

void check_keys(const Hyperparams& hp, const std::set<std::string>& allowed, RecKind kind) {
    for (const auto& [key, value] : hp) {
        if (!allowed.count(key))
            throw std::runtime_error("unknown hyperparameter '" + key + "' for model " + to_string(kind));
    }
}

long long get_int(const Hyperparams& hp, const std::string& key, long long fallback) {
    auto it = hp.find(key);
    if (it == hp.end()) return fallback;
    long long v;
    if (!parse_long(it->second, v))
        throw std::runtime_error("hyperparameter '" + key + "' is not an integer: " + it->second);
    return v;
}

double get_double(const Hyperparams& hp, const std::string& key, double fallback) {
    auto it = hp.find(key);
    if (it == hp.end()) return fallback;
    double v;
    if (!parse_double(it->second, v))
        throw std::runtime_error("hyperparameter '" + key + "' is not a number: " + it->second);
    return v;
}

std::string get_choice(const Hyperparams& hp, const std::string& key, const std::string& fallback,
                       const std::set<std::string>& allowed) {
    auto it = hp.find(key);
    const std::string v = it == hp.end() ? fallback : it->second;
    if (!allowed.count(v))
        throw std::runtime_error("hyperparameter '" + key + "' has unsupported value '" + v + "'");
    return v;
}

// Word-packed membership mask over the item space.
class ItemMask {
public:
    explicit ItemMask(std::int32_t n_items) : bits_((static_cast<std::size_t>(n_items) + 63) / 64, 0) {}
    void set(std::int32_t i) { bits_[static_cast<std::size_t>(i) >> 6] |= 1ull << (i & 63); }
    bool test(std::int32_t i) const { return (bits_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1ull; }

private:
    std::vector<std::uint64_t> bits_;
};

class RandomRecommender final : public Recommender {
public:
    RandomRecommender(std::int32_t n_users, std::int32_t n_items, Hyperparams hp, std::uint64_t seed)
        : Recommender(RecKind::random, n_users, n_items, std::move(hp)), seed_(seed) {}

    double score(std::int32_t user, std::int32_t item) const override {
        const std::uint64_t key =
            mix_seed(mix_seed(seed_, static_cast<std::uint64_t>(user)), static_cast<std::uint64_t>(item));
        return static_cast<double>(key >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
};

class MostPopRecommender final : public Recommender {
public:
    MostPopRecommender(std::int32_t n_users, std::int32_t n_items, Hyperparams hp,
                       std::vector<double> counts)
        : Recommender(RecKind::mostpop, n_users, n_items, std::move(hp)), counts_(std::move(counts)) {}

    double score(std::int32_t, std::int32_t item) const override {
        return counts_[static_cast<std::size_t>(item)];
    }

private:
    std::vector<double> counts_;
};

class AttItemKnnRecommender final : public Recommender {
public:
    AttItemKnnRecommender(std::int32_t n_users, std::int32_t n_items, Hyperparams hp)
        : Recommender(RecKind::att_item_knn, n_users, n_items, std::move(hp)) {}

    double score(std::int32_t user, std::int32_t item) const override {
        if (cold_user(user)) return 0.0;
        const auto& mask = profile_masks_[static_cast<std::size_t>(user)];
        const auto& nbr = neighbors_[static_cast<std::size_t>(item)];
        const auto& sim = neighbor_sims_[static_cast<std::size_t>(item)];
        double acc = 0.0;
        for (std::size_t j = 0; j < nbr.size(); ++j)
            if (mask.test(nbr[j])) acc += sim[j];
        return acc;
    }

    bool cold_user(std::int32_t user) const override {
        return user < 0 || user >= n_users_ || profile_sizes_[static_cast<std::size_t>(user)] == 0;
    }

    std::vector<std::vector<std::int32_t>> neighbors_;
    std::vector<std::vector<double>> neighbor_sims_;
    std::vector<ItemMask> profile_masks_;
    std::vector<std::int32_t> profile_sizes_;
};

class VsmRecommender final : public Recommender {
public:
    VsmRecommender(std::int32_t n_users, std::int32_t n_items, Hyperparams hp)
        : Recommender(RecKind::vsm, n_users, n_items, std::move(hp)) {}

    double score(std::int32_t user, std::int32_t item) const override {
        if (cold_user(user)) return 0.0;
        const double in = item_norms_[static_cast<std::size_t>(item)];
        if (in == 0.0) return 0.0;
        const double un = profile_norms_[static_cast<std::size_t>(user)];
        if (un == 0.0) return 0.0;
        const double* p = profiles_.data() + static_cast<std::size_t>(user) * static_cast<std::size_t>(dim_);
        const double* x = items_.data() + static_cast<std::size_t>(item) * static_cast<std::size_t>(dim_);
        return kernels::dot(p, x, static_cast<std::size_t>(dim_)) / (un * in);
    }

    bool cold_user(std::int32_t user) const override {
        return user < 0 || user >= n_users_ || !has_profile_[static_cast<std::size_t>(user)];
    }

    std::int32_t dim_ = 0;
    std::vector<double> items_;         // row-major item vectors
    std::vector<double> item_norms_;
    std::vector<double> profiles_;      // row-major user vectors
    std::vector<double> profile_norms_;
    std::vector<char> has_profile_;
};

std::unique_ptr<Recommender> train_att_item_knn(const InteractionDataset& train,
                                                const ItemFeatureCatalog& catalog, Hyperparams hp) {
    check_keys(hp, {"k", "shrink", "weighting"}, RecKind::att_item_knn);
    long long k = get_int(hp, "k", 100);
    const double shrink = get_double(hp, "shrink", 0.0);
    const bool tfidf = get_choice(hp, "weighting", "tfidf", {"binary", "tfidf"}) == "tfidf";
    if (k < 1) throw std::runtime_error("att-item-knn requires k >= 1");
    if (shrink < 0.0) throw std::runtime_error("att-item-knn requires shrink >= 0");

    const std::int32_t n_items = train.items.size();
    if (k > n_items - 1 && n_items > 1) {
        std::cerr << "[limers] warning: k=" << k << " exceeds usable neighbors, clamping to "
                  << (n_items - 1) << "\n";
        k = n_items - 1;
        hp["k"] = std::to_string(k);
    }

    auto model = std::make_unique<AttItemKnnRecommender>(train.users.size(), n_items, std::move(hp));

    const FeatureMatrix fm = build_feature_matrix(catalog, tfidf);
    const std::size_t dim = static_cast<std::size_t>(fm.dim);

    // Item-item cosine with shrinkage; keep the k strongest positive
    // similarities per item, ties by ascending index.
    model->neighbors_.resize(static_cast<std::size_t>(n_items));
    model->neighbor_sims_.resize(static_cast<std::size_t>(n_items));
    std::vector<std::pair<double, std::int32_t>> row(static_cast<std::size_t>(n_items));
    for (std::int32_t i = 0; i < n_items; ++i) {
        const double* xi = fm.row(i);
        const double ni = fm.norms[static_cast<std::size_t>(i)];
        std::size_t filled = 0;
        for (std::int32_t j = 0; j < n_items; ++j) {
            if (j == i) continue;
            const double nj = fm.norms[static_cast<std::size_t>(j)];
            if (ni == 0.0 || nj == 0.0) continue;
            const double d = kernels::dot(xi, fm.row(j), dim);
            if (d <= 0.0) continue;
            row[filled++] = {d / (ni * nj + shrink), j};
        }
        const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), filled);
        auto cmp = [](const auto& a, const auto& b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        };
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep),
                          row.begin() + static_cast<std::ptrdiff_t>(filled), cmp);
        auto& nbr = model->neighbors_[static_cast<std::size_t>(i)];
        auto& sims = model->neighbor_sims_[static_cast<std::size_t>(i)];
        nbr.reserve(keep);
        sims.reserve(keep);
        for (std::size_t r = 0; r < keep; ++r) {
            sims.push_back(row[r].first);
            nbr.push_back(row[r].second);
        }
    }

    model->profile_sizes_.assign(static_cast<std::size_t>(train.users.size()), 0);
    model->profile_masks_.assign(static_cast<std::size_t>(train.users.size()), ItemMask(n_items));
    for (const auto& t : train.transactions) {
        model->profile_masks_[static_cast<std::size_t>(t.user)].set(t.item);
        ++model->profile_sizes_[static_cast<std::size_t>(t.user)];
    }
    return model;
}

std::unique_ptr<Recommender> train_vsm(const InteractionDataset& train,
                                       const ItemFeatureCatalog& catalog, Hyperparams hp) {
    check_keys(hp, {"weighting", "profile"}, RecKind::vsm);
    const bool tfidf = get_choice(hp, "weighting", "tfidf", {"binary", "tfidf"}) == "tfidf";
    const bool rating_weighted =
        get_choice(hp, "profile", "mean", {"mean", "rating-weighted"}) == "rating-weighted";

    auto model = std::make_unique<VsmRecommender>(train.users.size(), train.items.size(), std::move(hp));
    FeatureMatrix fm = build_feature_matrix(catalog, tfidf);
    model->dim_ = fm.dim;
    model->item_norms_ = fm.norms;

    const std::size_t dim = static_cast<std::size_t>(fm.dim);
    const std::size_t n_users = static_cast<std::size_t>(train.users.size());
    model->profiles_.assign(n_users * dim, 0.0);
    std::vector<double> weight_sum(n_users, 0.0);
    for (const auto& t : train.transactions) {
        const double w = rating_weighted ? t.rating : 1.0;
        kernels::axpy(w, fm.row(t.item),
                      model->profiles_.data() + static_cast<std::size_t>(t.user) * dim, dim);
        weight_sum[static_cast<std::size_t>(t.user)] += w;
    }
    model->has_profile_.assign(n_users, 0);
    model->profile_norms_.assign(n_users, 0.0);
    for (std::size_t u = 0; u < n_users; ++u) {
        double* p = model->profiles_.data() + u * dim;
        if (weight_sum[u] > 0.0) {
            for (std::size_t f = 0; f < dim; ++f) p[f] /= weight_sum[u];
            model->has_profile_[u] = 1;
        }
        model->profile_norms_[u] = std::sqrt(kernels::dot(p, p, dim));
    }
    model->items_ = std::move(fm.values);
    return model;
}

}  // namespace

RecKind rec_kind_from_string(const std::string& s) {
    if (s == "random") return RecKind::random;
    if (s == "mostpop") return RecKind::mostpop;
    if (s == "att-item-knn") return RecKind::att_item_knn;
    if (s == "vsm") return RecKind::vsm;
    throw std::runtime_error("unknown recommender kind: " + s);
}

std::string to_string(RecKind k) {
    switch (k) {
        case RecKind::random: return "random";
        case RecKind::mostpop: return "mostpop";
        case RecKind::att_item_knn: return "att-item-knn";
        case RecKind::vsm: return "vsm";
    }
    return "?";
}

FeatureMatrix build_feature_matrix(const ItemFeatureCatalog& catalog, bool tfidf) {
    FeatureMatrix fm;
    fm.items = static_cast<std::int32_t>(catalog.item_features.size());
    fm.dim = catalog.feature_count();
    const std::size_t dim = static_cast<std::size_t>(fm.dim);
    fm.values.assign(static_cast<std::size_t>(fm.items) * dim, 0.0);
    fm.norms.assign(static_cast<std::size_t>(fm.items), 0.0);

    std::vector<double> idf(dim, 1.0);
    if (tfidf) {
        std::vector<std::int64_t> df(dim, 0);
        for (const auto& feats : catalog.item_features)
            for (auto f : feats) ++df[static_cast<std::size_t>(f)];
        for (std::size_t f = 0; f < dim; ++f)
            idf[f] = df[f] > 0 ? std::log(static_cast<double>(fm.items) / static_cast<double>(df[f]))
                               : 0.0;
    }
    for (std::int32_t i = 0; i < fm.items; ++i) {
        double* row = fm.values.data() + static_cast<std::size_t>(i) * dim;
        for (auto f : catalog.item_features[static_cast<std::size_t>(i)])
            row[static_cast<std::size_t>(f)] = tfidf ? idf[static_cast<std::size_t>(f)] : 1.0;
        fm.norms[static_cast<std::size_t>(i)] = std::sqrt(kernels::dot(row, row, dim));
    }
    return fm;
}

std::unique_ptr<Recommender> train_recommender(RecKind kind, const InteractionDataset& train,
                                               const ItemFeatureCatalog& catalog,
                                               const Hyperparams& hp, std::uint64_t seed) {
    if (train.transactions.empty()) throw std::runtime_error("train_recommender: empty training set");
    switch (kind) {
        case RecKind::random: {
            check_keys(hp, {}, kind);
            return std::make_unique<RandomRecommender>(train.users.size(), train.items.size(), hp, seed);
        }
        case RecKind::mostpop: {
            check_keys(hp, {}, kind);
            std::vector<double> counts(static_cast<std::size_t>(train.items.size()), 0.0);
            for (const auto& t : train.transactions) counts[static_cast<std::size_t>(t.item)] += 1.0;
            return std::make_unique<MostPopRecommender>(train.users.size(), train.items.size(), hp,
                                                        std::move(counts));
        }
        case RecKind::att_item_knn:
            return train_att_item_knn(train, catalog, hp);
        case RecKind::vsm:
            return train_vsm(train, catalog, hp);
    }
    throw std::runtime_error("unreachable recommender kind");
}

RecommendationList recommend_top_n(const Recommender& model, std::int32_t user, int n,
                                   std::span<const std::int32_t> exclude) {
    if (n < 1) throw std::runtime_error("recommend_top_n: n must be >= 1");
    RecommendationList list;
    list.user = user;

    std::vector<char> excluded(static_cast<std::size_t>(model.n_items()), 0);
    for (auto i : exclude)
        if (i >= 0 && i < model.n_items()) excluded[static_cast<std::size_t>(i)] = 1;

    std::vector<RecommendationEntry> scored;
    scored.reserve(static_cast<std::size_t>(model.n_items()));
    for (std::int32_t i = 0; i < model.n_items(); ++i) {
        if (excluded[static_cast<std::size_t>(i)]) continue;
        scored.push_back({i, model.score(user, i)});
    }
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(n), scored.size());
    auto cmp = [](const RecommendationEntry& a, const RecommendationEntry& b) {
        return a.score > b.score || (a.score == b.score && a.item < b.item);
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                      cmp);
    scored.resize(keep);
    list.entries = std::move(scored);
    list.short_list = list.entries.size() < static_cast<std::size_t>(n);
    return list;
}

std::vector<Hyperparams> default_grid(RecKind kind) {
    std::vector<Hyperparams> grid;
    switch (kind) {
        case RecKind::random:
        case RecKind::mostpop:
            grid.push_back({});
            break;
        case RecKind::att_item_knn:
            for (const char* k : {"10", "50", "100", "200"})
                for (const char* shrink : {"0", "10", "100"})
                    grid.push_back({{"k", k}, {"shrink", shrink}, {"weighting", "tfidf"}});
            break;
        case RecKind::vsm:
            for (const char* weighting : {"binary", "tfidf"})
                for (const char* profile : {"mean", "rating-weighted"})
                    grid.push_back({{"weighting", weighting}, {"profile", profile}});
            break;
    }
    return grid;
}

}  // namespace limers
