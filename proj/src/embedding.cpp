#include "promptsteal/embedding.hpp"

#include <cmath>

#include <httplib.h>

#include "promptsteal/errors.hpp"
#include "promptsteal/util.hpp"

namespace promptsteal {

using nlohmann::json;

EmbeddingVector HashEmbeddingBackend::embed(const std::string& text) {
    if (text.empty()) {
        throw Error(ErrorCode::EmptyText, "cannot embed empty text");
    }
    EmbeddingVector vec;
    vec.values.assign(kDim, 0.0);
    for (const std::string& token : tokenize(text)) {
        vec.values[fnv1a64(token) % kDim] += 1.0;
    }
    return vec;
}

LookupEmbeddingBackend::LookupEmbeddingBackend(const std::filesystem::path& path)
    : path_(path.string()) {
    const std::string content = read_file(path);
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string::npos) end = content.size();
        std::string line = content.substr(pos, end - pos);
        pos = end + 1;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("text") || !j.contains("vector")) {
            throw Error(ErrorCode::ConfigInvalid, "bad embedding row in " + path_);
        }
        std::vector<double> values = j["vector"].get<std::vector<double>>();
        if (dim_ == 0) {
            dim_ = values.size();
        } else if (values.size() != dim_) {
            throw Error(ErrorCode::ConfigInvalid, "inconsistent embedding dim in " + path_);
        }
        table_[j["text"].get<std::string>()] = std::move(values);
    }
    if (table_.empty()) {
        throw Error(ErrorCode::ConfigInvalid, "no embeddings in " + path_);
    }
}

EmbeddingVector LookupEmbeddingBackend::embed(const std::string& text) {
    if (text.empty()) {
        throw Error(ErrorCode::EmptyText, "cannot embed empty text");
    }
    auto it = table_.find(text);
    if (it == table_.end()) {
        throw Error(ErrorCode::EmbeddingBackendUnavailable,
                    "no stored embedding for text of length " + std::to_string(text.size()));
    }
    return EmbeddingVector{it->second};
}

RemoteEmbeddingBackend::RemoteEmbeddingBackend(std::string endpoint,
                                               std::optional<std::string> credentials_env)
    : endpoint_(std::move(endpoint)), credentials_env_(std::move(credentials_env)) {}

namespace {

// Splits "http://host:port/path" into client base and path.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    std::size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos) {
        throw Error(ErrorCode::ConfigInvalid, "endpoint needs a scheme: " + endpoint);
    }
    std::size_t path = endpoint.find('/', scheme + 3);
    if (path == std::string::npos) {
        return {endpoint, "/"};
    }
    return {endpoint.substr(0, path), endpoint.substr(path)};
}

httplib::Headers auth_headers(const std::optional<std::string>& credentials_env) {
    httplib::Headers headers;
    if (credentials_env) {
        const char* value = std::getenv(credentials_env->c_str());
        if (value == nullptr) {
            throw Error(ErrorCode::BackendUnavailable,
                        "credential env var not set: " + *credentials_env);
        }
        headers.emplace("Authorization", std::string("Bearer ") + value);
    }
    return headers;
}

}  // namespace

EmbeddingVector RemoteEmbeddingBackend::embed(const std::string& text) {
    if (text.empty()) {
        throw Error(ErrorCode::EmptyText, "cannot embed empty text");
    }
    std::lock_guard<std::mutex> lock(mutex_);
    auto [base, path] = split_endpoint(endpoint_);
    httplib::Client client(base);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);

    json body;
    body["texts"] = json::array({text});
    auto result = client.Post(path, auth_headers(credentials_env_), body.dump(), "application/json");
    if (!result) {
        throw Error(ErrorCode::EmbeddingBackendUnavailable,
                    "embedding endpoint unreachable: " + endpoint_, /*transient=*/true);
    }
    if (result->status != 200) {
        throw Error(ErrorCode::EmbeddingBackendUnavailable,
                    "embedding endpoint returned " + std::to_string(result->status));
    }
    json j = json::parse(result->body, nullptr, false);
    if (j.is_discarded() || !j.contains("embeddings") || !j["embeddings"].is_array() ||
        j["embeddings"].empty()) {
        throw Error(ErrorCode::EmbeddingBackendUnavailable, "malformed embedding response");
    }
    std::vector<double> values = j["embeddings"][0].get<std::vector<double>>();
    if (dim_ == 0) {
        dim_ = values.size();
    } else if (values.size() != dim_) {
        throw Error(ErrorCode::EmbeddingBackendUnavailable, "embedding dimensionality drifted");
    }
    return EmbeddingVector{std::move(values)};
}

std::unique_ptr<EmbeddingBackend> make_embedding_backend(const nlohmann::json& config) {
    std::string kind = "hash_test";
    if (config.is_string()) {
        kind = config.get<std::string>();
    } else if (config.is_object() && config.contains("backend")) {
        kind = config["backend"].get<std::string>();
    }
    if (kind == "hash_test") {
        return std::make_unique<HashEmbeddingBackend>();
    }
    if (kind == "local") {
        if (!config.is_object() || !config.contains("path")) {
            throw Error(ErrorCode::ConfigInvalid, "local embedding backend needs a path");
        }
        return std::make_unique<LookupEmbeddingBackend>(config["path"].get<std::string>());
    }
    if (kind == "remote") {
        if (!config.is_object() || !config.contains("endpoint")) {
            throw Error(ErrorCode::ConfigInvalid, "remote embedding backend needs an endpoint");
        }
        std::optional<std::string> env;
        if (config.contains("credentials_env") && !config["credentials_env"].is_null()) {
            env = config["credentials_env"].get<std::string>();
        }
        return std::make_unique<RemoteEmbeddingBackend>(config["endpoint"].get<std::string>(), env);
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown embedding backend: " + kind);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        norm_a += a.values[i] * a.values[i];
        norm_b += b.values[i] * b.values[i];
    }
    if (norm_a <= 0.0 || norm_b <= 0.0) {
        // A silent 0 here would corrupt averaged similarity statistics.
        throw Error(ErrorCode::ZeroVector, "cosine of a zero-norm vector");
    }
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

double text_similarity(EmbeddingBackend& backend, const std::string& x, const std::string& y) {
    return cosine(backend.embed(x), backend.embed(y));
}

}  // namespace promptsteal
