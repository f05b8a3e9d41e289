#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace limers {

// Ordered vocabulary of external identifiers. Indices are assigned after
// sorting (numerically when every id is an integer, lexicographically
// otherwise), so they are reproducible across runs and machines.
class Vocab {
public:
    static Vocab from_ids(std::vector<std::string> ids);

    std::int32_t index_of(const std::string& external_id) const;  // -1 when absent
    const std::string& id_of(std::int32_t index) const { return ids_.at(static_cast<std::size_t>(index)); }
    std::int32_t size() const { return static_cast<std::int32_t>(ids_.size()); }
    const std::vector<std::string>& ids() const { return ids_; }

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::int32_t> index_;
};

struct Interaction {
    std::int32_t user = 0;
    std::int32_t item = 0;
    double rating = 0.0;
    std::int64_t timestamp = -1;  // -1 when the source has none
};

struct InteractionDataset {
    std::string name;
    Vocab users;
    Vocab items;
    std::vector<Interaction> transactions;
    double rating_min = 0.5;
    double rating_max = 5.0;
};

// item index -> sorted genre indices over a global genre vocabulary.
// Every item present here has at least one genre; items without genre
// metadata are dropped during loading and counted in the report.
struct ItemFeatureCatalog {
    std::vector<std::string> feature_vocab;
    std::vector<std::vector<std::int32_t>> item_features;

    std::int32_t feature_count() const { return static_cast<std::int32_t>(feature_vocab.size()); }
    const std::vector<std::int32_t>& features_of(std::int32_t item) const {
        return item_features.at(static_cast<std::size_t>(item));
    }
};

struct PreprocessReport {
    std::string dataset;
    std::int64_t raw_transactions = 0;
    std::int64_t kept_transactions = 0;
    std::int64_t dropped_no_genre = 0;        // transactions on items without usable genres
    std::int64_t dropped_duplicate = 0;       // repeated (user, item) pairs; first kept
    std::int64_t items_without_genres = 0;    // distinct rated items dropped
    std::int64_t users_dropped_empty = 0;     // users whose whole profile was dropped

    std::string to_text() const;
    std::string to_csv() const;
};

struct DatasetStats {
    std::int32_t users = 0;
    std::int32_t items = 0;
    std::int64_t transactions = 0;
    double sparsity = 0.0;  // 1 - t / (u * i)
};

enum class DataFormat { movielens_dat, movielens_csv, yahoo_tsv };

DataFormat data_format_from_string(const std::string& s);
std::string to_string(DataFormat f);

// Column map for the Yahoo!-style TSV pair (ratings + item metadata).
struct YahooColumns {
    std::string ratings_file = "ratings.tsv";
    std::string items_file = "movies.tsv";
    int user_col = 0;
    int item_col = 1;
    int rating_col = 2;
    int item_id_col = 0;
    int genre_col = 1;
    std::string genre_sep = "|";
};

struct LoadOptions {
    DataFormat format = DataFormat::movielens_csv;
    double rating_min = 0.5;
    double rating_max = 5.0;
    YahooColumns yahoo;
    std::string dataset_name;  // defaults to the directory name
};

// Reads ratings + item metadata from `path` (a directory), drops items
// without genres, and builds index-aligned structures. Throws
// std::runtime_error with a line number on malformed input, on ratings
// outside [rating_min, rating_max], and on an empty result.
std::pair<InteractionDataset, ItemFeatureCatalog> load_dataset(const std::string& path,
                                                               const LoadOptions& options,
                                                               PreprocessReport* report = nullptr);

DatasetStats dataset_stats(const InteractionDataset& ds);

struct TrainTestSplit {
    InteractionDataset train;
    InteractionDataset test;
    std::uint64_t seed = 0;
    double ratio = 0.8;
};

// Per-user random holdout: ceil(ratio * |profile|) transactions to train,
// the rest to test; users with fewer than 2 transactions go entirely to
// train. Both sides keep the source vocabularies, so indices stay valid
// across the split.
TrainTestSplit split_dataset(const InteractionDataset& ds, double ratio, std::uint64_t seed);

struct PopularityDistribution {
    std::vector<double> probs;  // over item index; sums to 1
};

// probs[i] = training interaction count of i / total training interactions.
PopularityDistribution popularity_distribution(const InteractionDataset& train);

// Sorted train-item lists per user index; users absent from train get an
// empty profile.
std::vector<std::vector<std::int32_t>> user_profiles(const InteractionDataset& ds);

}  // namespace limers
