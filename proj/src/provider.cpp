#include "semwave/provider.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <mutex>
#include <semaphore>
#include <stdexcept>
#include <thread>

#include <openssl/evp.h>

#include <httplib.h>
#include <json.hpp>

namespace semwave {

void ProviderConfig::validate() const {
    if (endpoint.empty()) throw std::invalid_argument("provider: endpoint required");
    if (model.empty()) throw std::invalid_argument("provider: model required");
    if (max_in_flight < 1) throw std::invalid_argument("provider: max_in_flight must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("provider: batch_size must be >= 1");
}

std::string cache_key(const std::string& model, const std::string& token) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, model.data(), model.size());
    EVP_DigestUpdate(ctx, "\x1f", 1); // separator so (m,t) pairs cannot collide
    EVP_DigestUpdate(ctx, token.data(), token.size());
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

namespace {

struct UrlParts {
    std::string base; // scheme://host[:port]
    std::string path;
};

UrlParts split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw std::invalid_argument("provider: endpoint must include a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::vector<std::vector<double>> parse_response(const std::string& body) {
    nlohmann::json j = nlohmann::json::parse(body);
    if (j.contains("embeddings"))
        return j.at("embeddings").get<std::vector<std::vector<double>>>();
    if (j.contains("data")) {
        std::vector<std::vector<double>> out;
        for (const auto& item : j.at("data"))
            out.push_back(item.at("embedding").get<std::vector<double>>());
        return out;
    }
    throw std::runtime_error("provider: response has neither 'embeddings' nor 'data'");
}

std::vector<std::vector<double>> post_batch(const ProviderConfig& cfg,
                                            const std::vector<std::string>& batch,
                                            const std::string& bearer) {
    UrlParts url = split_url(cfg.endpoint);
    nlohmann::json req;
    req["model"] = cfg.model;
    req["input"] = batch;
    const std::string body = req.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.backoff_base_ms << (attempt - 1)));
        httplib::Client cli(url.base);
        cli.set_read_timeout(60, 0);
        httplib::Headers headers;
        if (!bearer.empty()) headers.emplace("Authorization", "Bearer " + bearer);
        auto res = cli.Post(url.path, headers, body, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue; // transport failure: retry
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            continue; // server-side failure: retry
        }
        if (res->status < 200 || res->status >= 300)
            throw std::runtime_error("provider error (HTTP " + std::to_string(res->status) +
                                     "): " + res->body);
        auto vecs = parse_response(res->body);
        if (vecs.size() != batch.size())
            throw std::runtime_error("provider: got " + std::to_string(vecs.size()) +
                                     " embeddings for " + std::to_string(batch.size()) +
                                     " inputs");
        return vecs;
    }
    throw std::runtime_error("provider: giving up after " +
                             std::to_string(cfg.max_retries + 1) + " attempts: " + last_error);
}

} // namespace

EmbeddingSet fetch_embeddings(const ProviderConfig& config,
                              const std::vector<std::string>& tokens, FetchStats* stats) {
    config.validate();
    if (tokens.empty()) throw std::invalid_argument("provider: token list empty");

    std::string bearer;
    if (!config.credential_env.empty()) {
        const char* v = std::getenv(config.credential_env.c_str());
        if (!v) throw std::runtime_error("provider: credential environment variable '" +
                                         config.credential_env + "' is not set");
        bearer = v;
    }

    // Dedupe, preserving first-occurrence order.
    std::vector<std::string> distinct;
    {
        std::unordered_map<std::string, bool> seen;
        for (const auto& t : tokens)
            if (seen.emplace(t, true).second) distinct.push_back(t);
    }

    FetchStats local;
    std::unordered_map<std::string, std::vector<double>> results;
    std::vector<std::string> misses;

    if (!config.cache_dir.empty()) {
        std::filesystem::create_directories(config.cache_dir);
        for (const auto& t : distinct) {
            auto path = config.cache_dir / (cache_key(config.model, t) + ".json");
            std::ifstream in(path);
            if (in) {
                nlohmann::json j = nlohmann::json::parse(in);
                results[t] = j.at("embedding").get<std::vector<double>>();
                ++local.cache_hits;
            } else {
                misses.push_back(t);
            }
        }
    } else {
        misses = distinct;
    }

    if (!misses.empty()) {
        std::vector<std::vector<std::string>> batches;
        for (std::size_t i = 0; i < misses.size(); i += config.batch_size) {
            batches.emplace_back(misses.begin() + static_cast<std::ptrdiff_t>(i),
                                 misses.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(i + config.batch_size,
                                                               misses.size())));
        }

        std::counting_semaphore<> gate(static_cast<std::ptrdiff_t>(config.max_in_flight));
        std::mutex write_mutex; // serializes result and cache writes
        std::vector<std::future<void>> futs;
        for (const auto& batch : batches) {
            futs.push_back(std::async(std::launch::async, [&, batch] {
                gate.acquire();
                struct Release {
                    std::counting_semaphore<>& g;
                    ~Release() { g.release(); }
                } release{gate};
                auto vecs = post_batch(config, batch, bearer);
                std::lock_guard lock(write_mutex);
                ++local.requests;
                for (std::size_t i = 0; i < batch.size(); ++i) {
                    results[batch[i]] = vecs[i];
                    if (!config.cache_dir.empty()) {
                        auto path = config.cache_dir /
                                    (cache_key(config.model, batch[i]) + ".json");
                        auto tmp = path;
                        tmp += ".tmp";
                        nlohmann::json j;
                        j["model"] = config.model;
                        j["token"] = batch[i];
                        j["embedding"] = vecs[i];
                        std::ofstream out(tmp);
                        out << j.dump();
                        out.close();
                        std::filesystem::rename(tmp, path);
                    }
                }
            }));
        }
        for (auto& f : futs) f.get(); // rethrows the first failure
    }

    EmbeddingSet set(config.model);
    for (const auto& t : distinct) {
        EmbeddingVector vec;
        vec.values = results.at(t);
        set.insert(t, std::move(vec));
    }
    if (stats) *stats = local;
    return set;
}

} // namespace semwave
