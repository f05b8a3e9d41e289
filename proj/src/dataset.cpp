#include "limers/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "limers/rng.hpp"
#include "limers/text.hpp"

namespace limers {

namespace {

[[noreturn]] void fail(const std::string& file, std::size_t line_no, const std::string& what) {
    throw std::runtime_error(file + ":" + std::to_string(line_no) + ": " + what);
}

bool all_numeric(const std::vector<std::string>& ids) {
    for (const auto& id : ids) {
        long long v;
        if (!parse_long(id, v)) return false;
    }
    return true;
}

struct RawTransaction {
    std::string user;
    std::string item;
    double rating;
    std::int64_t timestamp;
};

struct RawItem {
    std::string id;
    std::vector<std::string> genres;
};

std::ifstream open_or_throw(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    return in;
}

bool looks_like_header(const std::string& first_field) {
    long long v;
    double d;
    return !parse_long(first_field, v) && !parse_double(first_field, d);
}

std::vector<RawItem> read_items_sep(const std::filesystem::path& p, const std::string& sep,
                                    int id_col, int genre_col, const std::string& genre_sep,
                                    bool csv_quotes) {
    auto in = open_or_throw(p);
    std::vector<RawItem> items;
    std::string line;
    std::size_t line_no = 0;
    const int need = std::max(id_col, genre_col) + 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = csv_quotes ? split_csv(line) : split(line, sep);
        if (line_no == 1 && !fields.empty() && looks_like_header(fields[0])) continue;
        if (static_cast<int>(fields.size()) < need)
            fail(p.string(), line_no, "expected at least " + std::to_string(need) + " fields");
        RawItem item;
        item.id = std::string(trim(fields[static_cast<std::size_t>(id_col)]));
        if (item.id.empty()) fail(p.string(), line_no, "empty item id");
        const std::string genres_raw(trim(fields[static_cast<std::size_t>(genre_col)]));
        if (!genres_raw.empty() && genres_raw != "(no genres listed)") {
            for (auto& g : split(genres_raw, genre_sep)) {
                const std::string name(trim(g));
                if (!name.empty()) item.genres.push_back(name);
            }
        }
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<RawTransaction> read_ratings_sep(const std::filesystem::path& p, const std::string& sep,
                                             int user_col, int item_col, int rating_col,
                                             int timestamp_col, double rating_min, double rating_max) {
    auto in = open_or_throw(p);
    std::vector<RawTransaction> txns;
    std::string line;
    std::size_t line_no = 0;
    int need = std::max(std::max(user_col, item_col), rating_col) + 1;
    if (timestamp_col >= 0) need = std::max(need, timestamp_col + 1);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split(line, sep);
        if (line_no == 1 && !fields.empty() && looks_like_header(fields[0])) continue;
        if (static_cast<int>(fields.size()) < need)
            fail(p.string(), line_no, "expected at least " + std::to_string(need) + " fields");
        RawTransaction t;
        t.user = std::string(trim(fields[static_cast<std::size_t>(user_col)]));
        t.item = std::string(trim(fields[static_cast<std::size_t>(item_col)]));
        if (t.user.empty() || t.item.empty()) fail(p.string(), line_no, "empty user or item id");
        if (!parse_double(fields[static_cast<std::size_t>(rating_col)], t.rating))
            fail(p.string(), line_no, "unparsable rating '" + fields[static_cast<std::size_t>(rating_col)] + "'");
        if (t.rating < rating_min || t.rating > rating_max)
            fail(p.string(), line_no,
                 "rating " + format_exact(t.rating) + " outside declared scale [" +
                     format_exact(rating_min) + ", " + format_exact(rating_max) + "]");
        t.timestamp = -1;
        if (timestamp_col >= 0) {
            long long ts;
            if (!parse_long(fields[static_cast<std::size_t>(timestamp_col)], ts))
                fail(p.string(), line_no, "unparsable timestamp");
            t.timestamp = ts;
        }
        txns.push_back(std::move(t));
    }
    return txns;
}

}  // namespace

Vocab Vocab::from_ids(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (all_numeric(ids)) {
        std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
            long long va = 0, vb = 0;
            parse_long(a, va);
            parse_long(b, vb);
            return va < vb;
        });
    }
    Vocab v;
    v.index_.reserve(ids.size() * 2);
    for (std::size_t i = 0; i < ids.size(); ++i) v.index_.emplace(ids[i], static_cast<std::int32_t>(i));
    v.ids_ = std::move(ids);
    return v;
}

std::int32_t Vocab::index_of(const std::string& external_id) const {
    auto it = index_.find(external_id);
    return it == index_.end() ? -1 : it->second;
}

DataFormat data_format_from_string(const std::string& s) {
    if (s == "movielens-dat") return DataFormat::movielens_dat;
    if (s == "movielens-csv") return DataFormat::movielens_csv;
    if (s == "yahoo-tsv") return DataFormat::yahoo_tsv;
    throw std::runtime_error("unknown dataset format: " + s);
}

std::string to_string(DataFormat f) {
    switch (f) {
        case DataFormat::movielens_dat: return "movielens-dat";
        case DataFormat::movielens_csv: return "movielens-csv";
        case DataFormat::yahoo_tsv: return "yahoo-tsv";
    }
    return "?";
}

std::string PreprocessReport::to_text() const {
    std::ostringstream out;
    out << "preprocessing report: " << dataset << "\n"
        << "  raw transactions:            " << raw_transactions << "\n"
        << "  kept transactions:           " << kept_transactions << "\n"
        << "  dropped (item has no genre): " << dropped_no_genre << "\n"
        << "  dropped (duplicate pair):    " << dropped_duplicate << "\n"
        << "  rated items without genres:  " << items_without_genres << "\n"
        << "  users left empty:            " << users_dropped_empty << "\n";
    return out.str();
}

std::string PreprocessReport::to_csv() const {
    std::ostringstream out;
    out << "dataset,raw_transactions,kept_transactions,dropped_no_genre,dropped_duplicate,"
           "items_without_genres,users_dropped_empty\n"
        << csv_escape(dataset) << ',' << raw_transactions << ',' << kept_transactions << ','
        << dropped_no_genre << ',' << dropped_duplicate << ',' << items_without_genres << ','
        << users_dropped_empty << "\n";
    return out.str();
}

std::pair<InteractionDataset, ItemFeatureCatalog> load_dataset(const std::string& path,
                                                               const LoadOptions& options,
                                                               PreprocessReport* report) {
    namespace fs = std::filesystem;
    const fs::path dir(path);
    if (!fs::exists(dir)) throw std::runtime_error("dataset path does not exist: " + path);

    std::vector<RawItem> raw_items;
    std::vector<RawTransaction> raw_txns;
    switch (options.format) {
        case DataFormat::movielens_dat:
            raw_items = read_items_sep(dir / "movies.dat", "::", 0, 2, "|", false);
            raw_txns = read_ratings_sep(dir / "ratings.dat", "::", 0, 1, 2, 3,
                                        options.rating_min, options.rating_max);
            break;
        case DataFormat::movielens_csv:
            raw_items = read_items_sep(dir / "movies.csv", ",", 0, 2, "|", true);
            raw_txns = read_ratings_sep(dir / "ratings.csv", ",", 0, 1, 2, 3,
                                        options.rating_min, options.rating_max);
            break;
        case DataFormat::yahoo_tsv: {
            const auto& y = options.yahoo;
            raw_items = read_items_sep(dir / y.items_file, "\t", y.item_id_col, y.genre_col,
                                       y.genre_sep, false);
            raw_txns = read_ratings_sep(dir / y.ratings_file, "\t", y.user_col, y.item_col,
                                        y.rating_col, -1, options.rating_min, options.rating_max);
            break;
        }
    }

    PreprocessReport rep;
    rep.dataset = options.dataset_name.empty() ? dir.filename().string() : options.dataset_name;
    rep.raw_transactions = static_cast<std::int64_t>(raw_txns.size());

    std::unordered_map<std::string, std::vector<std::string>> genres_by_item;
    genres_by_item.reserve(raw_items.size() * 2);
    for (auto& item : raw_items) {
        if (!item.genres.empty()) genres_by_item.emplace(item.id, std::move(item.genres));
    }

    // Filter: keep transactions whose item carries genre metadata, drop
    // repeated (user, item) pairs keeping the first occurrence.
    std::set<std::string> dropped_items;
    std::set<std::string> users_seen, users_kept;
    std::set<std::pair<std::string, std::string>> seen_pairs;
    std::vector<RawTransaction> kept;
    kept.reserve(raw_txns.size());
    for (auto& t : raw_txns) {
        users_seen.insert(t.user);
        if (genres_by_item.find(t.item) == genres_by_item.end()) {
            ++rep.dropped_no_genre;
            dropped_items.insert(t.item);
            continue;
        }
        if (!seen_pairs.emplace(t.user, t.item).second) {
            ++rep.dropped_duplicate;
            continue;
        }
        users_kept.insert(t.user);
        kept.push_back(std::move(t));
    }
    rep.items_without_genres = static_cast<std::int64_t>(dropped_items.size());
    rep.users_dropped_empty =
        static_cast<std::int64_t>(users_seen.size()) - static_cast<std::int64_t>(users_kept.size());
    rep.kept_transactions = static_cast<std::int64_t>(kept.size());

    if (kept.empty()) throw std::runtime_error("dataset is empty after preprocessing: " + path);

    std::vector<std::string> user_ids, item_ids;
    user_ids.reserve(kept.size());
    item_ids.reserve(kept.size());
    for (const auto& t : kept) {
        user_ids.push_back(t.user);
        item_ids.push_back(t.item);
    }

    InteractionDataset ds;
    ds.name = rep.dataset;
    ds.rating_min = options.rating_min;
    ds.rating_max = options.rating_max;
    ds.users = Vocab::from_ids(std::move(user_ids));
    ds.items = Vocab::from_ids(std::move(item_ids));
    ds.transactions.reserve(kept.size());
    for (const auto& t : kept) {
        Interaction tr;
        tr.user = ds.users.index_of(t.user);
        tr.item = ds.items.index_of(t.item);
        tr.rating = t.rating;
        tr.timestamp = t.timestamp;
        ds.transactions.push_back(tr);
    }

    // Genre vocabulary over retained items only, sorted for stable indices.
    std::set<std::string> genre_set;
    for (std::int32_t i = 0; i < ds.items.size(); ++i)
        for (const auto& g : genres_by_item.at(ds.items.id_of(i))) genre_set.insert(g);

    ItemFeatureCatalog catalog;
    catalog.feature_vocab.assign(genre_set.begin(), genre_set.end());
    std::unordered_map<std::string, std::int32_t> genre_index;
    for (std::size_t i = 0; i < catalog.feature_vocab.size(); ++i)
        genre_index.emplace(catalog.feature_vocab[i], static_cast<std::int32_t>(i));

    catalog.item_features.resize(static_cast<std::size_t>(ds.items.size()));
    for (std::int32_t i = 0; i < ds.items.size(); ++i) {
        auto& row = catalog.item_features[static_cast<std::size_t>(i)];
        for (const auto& g : genres_by_item.at(ds.items.id_of(i))) row.push_back(genre_index.at(g));
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }

    if (report) *report = rep;
    return {std::move(ds), std::move(catalog)};
}

DatasetStats dataset_stats(const InteractionDataset& ds) {
    if (ds.transactions.empty()) throw std::runtime_error("dataset_stats: empty dataset");
    DatasetStats s;
    s.users = ds.users.size();
    s.items = ds.items.size();
    s.transactions = static_cast<std::int64_t>(ds.transactions.size());
    s.sparsity = 1.0 - static_cast<double>(s.transactions) /
                           (static_cast<double>(s.users) * static_cast<double>(s.items));
    return s;
}

TrainTestSplit split_dataset(const InteractionDataset& ds, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::runtime_error("split ratio must lie in (0, 1), got " + format_exact(ratio));

    std::vector<std::vector<std::size_t>> by_user(static_cast<std::size_t>(ds.users.size()));
    for (std::size_t t = 0; t < ds.transactions.size(); ++t)
        by_user[static_cast<std::size_t>(ds.transactions[t].user)].push_back(t);

    TrainTestSplit out;
    out.seed = seed;
    out.ratio = ratio;
    out.train.name = ds.name + ".train";
    out.test.name = ds.name + ".test";
    out.train.users = out.test.users = ds.users;
    out.train.items = out.test.items = ds.items;
    out.train.rating_min = out.test.rating_min = ds.rating_min;
    out.train.rating_max = out.test.rating_max = ds.rating_max;

    for (std::size_t u = 0; u < by_user.size(); ++u) {
        auto& idx = by_user[u];
        if (idx.size() < 2) {
            for (auto t : idx) out.train.transactions.push_back(ds.transactions[t]);
            continue;
        }
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(u)));
        shuffle_indices(idx, rng);
        const auto n_train = static_cast<std::size_t>(
            std::ceil(ratio * static_cast<double>(idx.size())));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto& dst = i < n_train ? out.train.transactions : out.test.transactions;
            dst.push_back(ds.transactions[idx[i]]);
        }
    }
    return out;
}

PopularityDistribution popularity_distribution(const InteractionDataset& train) {
    if (train.transactions.empty()) throw std::runtime_error("popularity_distribution: empty train set");
    PopularityDistribution pop;
    pop.probs.assign(static_cast<std::size_t>(train.items.size()), 0.0);
    for (const auto& t : train.transactions) pop.probs[static_cast<std::size_t>(t.item)] += 1.0;
    const double total = static_cast<double>(train.transactions.size());
    for (auto& p : pop.probs) p /= total;
    return pop;
}

std::vector<std::vector<std::int32_t>> user_profiles(const InteractionDataset& ds) {
    std::vector<std::vector<std::int32_t>> profiles(static_cast<std::size_t>(ds.users.size()));
    for (const auto& t : ds.transactions) profiles[static_cast<std::size_t>(t.user)].push_back(t.item);
    for (auto& p : profiles) std::sort(p.begin(), p.end());
    return profiles;
}

}  // namespace limers
