#include "semwave/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "semwave/kernels.hpp"

namespace semwave {

double EmbeddingVector::norm() const {
    return std::sqrt(kern::sumsq(values.data(), values.size()));
}

void EmbeddingSet::insert(std::string token, EmbeddingVector vec) {
    if (entries_.count(token))
        throw std::runtime_error("duplicate token: " + token);
    if (order_.empty()) {
        dim_ = vec.dim();
    } else if (vec.dim() != dim_) {
        throw std::runtime_error("dimension mismatch for token '" + token + "': expected " +
                                 std::to_string(dim_) + ", got " + std::to_string(vec.dim()));
    }
    for (double v : vec.values)
        if (!std::isfinite(v))
            throw std::runtime_error("non-finite component in token '" + token + "'");
    order_.push_back(token);
    entries_.emplace(std::move(token), std::move(vec));
}

const EmbeddingVector* EmbeddingSet::find(const std::string& token) const {
    auto it = entries_.find(token);
    return it == entries_.end() ? nullptr : &it->second;
}

const EmbeddingVector& EmbeddingSet::at(const std::string& token) const {
    const EmbeddingVector* v = find(token);
    if (!v) throw std::runtime_error("unknown token: " + token);
    return *v;
}

namespace {

constexpr char kMagic[4] = {'S', 'E', 'M', 'W'};
constexpr std::uint32_t kBinaryVersion = 1;

EmbeddingSet load_jsonl(std::istream& in) {
    EmbeddingSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.contains("token") || !j.contains("embedding"))
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": expected keys 'token' and 'embedding'");
        EmbeddingVector vec;
        vec.values = j.at("embedding").get<std::vector<double>>();
        set.insert(j.at("token").get<std::string>(), std::move(vec));
    }
    return set;
}

EmbeddingSet load_csv(std::istream& in) {
    EmbeddingSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string token;
        if (!std::getline(ss, token, ','))
            throw std::runtime_error("line " + std::to_string(lineno) + ": missing token");
        EmbeddingVector vec;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                vec.values.push_back(std::stod(cell, &pos));
            } catch (const std::exception&) {
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": bad numeric cell '" + cell + "'");
            }
        }
        set.insert(std::move(token), std::move(vec));
    }
    return set;
}

template <typename T>
T read_le(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated binary embedding file");
    return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

EmbeddingSet load_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad magic: not a SEMW embedding file");
    const auto version = read_le<std::uint32_t>(in);
    if (version != kBinaryVersion)
        throw std::runtime_error("unsupported SEMW version " + std::to_string(version));
    const auto dim = read_le<std::uint32_t>(in);
    const auto count = read_le<std::uint64_t>(in);
    EmbeddingSet set;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto len = read_le<std::uint32_t>(in);
        std::string token(len, '\0');
        in.read(token.data(), len);
        if (!in) throw std::runtime_error("truncated binary embedding file");
        EmbeddingVector vec;
        vec.values.resize(dim);
        in.read(reinterpret_cast<char*>(vec.values.data()),
                static_cast<std::streamsize>(dim * sizeof(double)));
        if (!in) throw std::runtime_error("truncated binary embedding file");
        set.insert(std::move(token), std::move(vec));
    }
    return set;
}

} // namespace

EmbeddingSet load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
    std::ifstream in(path, format == EmbeddingFormat::binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        switch (format) {
            case EmbeddingFormat::jsonl: return load_jsonl(in);
            case EmbeddingFormat::csv: return load_csv(in);
            case EmbeddingFormat::binary: return load_binary(in);
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    throw std::logic_error("unreachable");
}

void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path,
                     EmbeddingFormat format) {
    std::ofstream out(path, format == EmbeddingFormat::binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    switch (format) {
        case EmbeddingFormat::jsonl:
            for (const auto& token : set.tokens()) {
                nlohmann::json j;
                j["token"] = token;
                j["embedding"] = set.at(token).values;
                out << j.dump() << '\n';
            }
            break;
        case EmbeddingFormat::csv:
            for (const auto& token : set.tokens()) {
                out << token;
                for (double v : set.at(token).values) {
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), "%.17g", v);
                    out << ',' << buf;
                }
                out << '\n';
            }
            break;
        case EmbeddingFormat::binary: {
            out.write(kMagic, 4);
            write_le(out, kBinaryVersion);
            write_le(out, static_cast<std::uint32_t>(set.dim()));
            write_le(out, static_cast<std::uint64_t>(set.size()));
            for (const auto& token : set.tokens()) {
                write_le(out, static_cast<std::uint32_t>(token.size()));
                out.write(token.data(), static_cast<std::streamsize>(token.size()));
                const auto& vals = set.at(token).values;
                out.write(reinterpret_cast<const char*>(vals.data()),
                          static_cast<std::streamsize>(vals.size() * sizeof(double)));
            }
            break;
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("cosine_similarity: dimension mismatch");
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("cosine_similarity: zero-norm vector");
    return kern::dot(a.values.data(), b.values.data(), a.dim()) / (na * nb);
}

PcaResult pca_project(const EmbeddingSet& set, std::size_t k) {
    const std::size_t n = set.size();
    const std::size_t d = set.dim();
    if (n < 2) throw std::invalid_argument("pca_project: need at least 2 entries");
    if (k < 1 || k > std::min(n, d))
        throw std::invalid_argument("pca_project: k out of range");

    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v = set.at(set.tokens()[i]).values;
        for (std::size_t j = 0; j < d; ++j) X(i, j) = v[j];
    }
    Eigen::RowVectorXd mean = X.colwise().mean();
    X.rowwise() -= mean;

    if (X.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("pca_project: degenerate input (all entries identical)");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double total_var = sv.squaredNorm();

    PcaResult res;
    res.tokens = set.tokens();
    res.mean.assign(mean.data(), mean.data() + d);
    res.components.resize(k);
    res.explained_variance_ratio.resize(k);

    Eigen::MatrixXd V = svd.matrixV(); // d x min(n,d)
    for (std::size_t c = 0; c < k; ++c) {
        Eigen::VectorXd comp = V.col(static_cast<Eigen::Index>(c));
        // Sign convention: largest-magnitude loading is positive.
        Eigen::Index imax;
        comp.cwiseAbs().maxCoeff(&imax);
        if (comp(imax) < 0.0) comp = -comp;
        res.components[c].assign(comp.data(), comp.data() + d);
        res.explained_variance_ratio[c] = sv(static_cast<Eigen::Index>(c)) *
                                          sv(static_cast<Eigen::Index>(c)) / total_var;
    }

    res.coords.resize(n, std::vector<double>(k));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                s += X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                     res.components[c][j];
            res.coords[i][c] = s;
        }
    }
    return res;
}

EmbeddingLookup lookup_from(const EmbeddingSet& set) {
    return [&set](const std::string& token) -> std::optional<EmbeddingVector> {
        const EmbeddingVector* v = set.find(token);
        if (!v) return std::nullopt;
        return *v;
    };
}

ScanResult scan_balanced_tokens(const EmbeddingLookup& source, const std::string& target_a,
                                const std::string& target_b, const std::string& alphabet,
                                std::size_t max_len, std::size_t candidate_cap) {
    if (alphabet.empty()) throw std::invalid_argument("scan: empty alphabet");
    if (max_len < 1) throw std::invalid_argument("scan: max_len must be >= 1");
    auto va = source(target_a);
    auto vb = source(target_b);
    if (!va) throw std::runtime_error("scan: unresolvable target '" + target_a + "'");
    if (!vb) throw std::runtime_error("scan: unresolvable target '" + target_b + "'");

    // Total candidate count: sum of |alphabet|^l for l = 1..max_len.
    std::size_t total = 0, pw = 1;
    for (std::size_t l = 1; l <= max_len; ++l) {
        if (pw > candidate_cap / alphabet.size())
            throw std::runtime_error("scan: candidate count exceeds cap");
        pw *= alphabet.size();
        total += pw;
        if (total > candidate_cap)
            throw std::runtime_error("scan: candidate count exceeds cap");
    }

    ScanResult res;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::optional<ScanEntry> best;
        std::vector<std::size_t> idx(len, 0);
        for (;;) {
            std::string cand(len, ' ');
            for (std::size_t i = 0; i < len; ++i) cand[i] = alphabet[idx[i]];
            if (auto vc = source(cand)) {
                const double d = std::abs(cosine_similarity(*vc, *va) -
                                          cosine_similarity(*vc, *vb));
                res.ranked.push_back({cand, d});
                if (!best || d < best->delta) best = res.ranked.back();
            }
            // odometer increment
            std::size_t pos = len;
            while (pos > 0) {
                if (++idx[pos - 1] < alphabet.size()) break;
                idx[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
        if (best) res.best_per_length.push_back(*best);
    }
    if (res.ranked.empty()) throw std::runtime_error("scan: empty candidate space");
    std::stable_sort(res.ranked.begin(), res.ranked.end(),
                     [](const ScanEntry& x, const ScanEntry& y) { return x.delta < y.delta; });
    return res;
}

} // namespace semwave
