#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

namespace promptsteal {

enum class BackendKind { RemoteApi, EchoMock, ScriptedMock, TemplateMock };

std::string_view to_string(BackendKind kind);
BackendKind backend_kind_from_string(std::string_view name);

struct GenerationParams {
    double temperature = 0.0;  // greedy by default for reproducible runs
    int max_tokens = 256;
    std::optional<std::int64_t> seed;

    bool operator==(const GenerationParams& other) const = default;
};

struct CompletionRequest {
    std::string model_id;
    std::string prompt_text;
    GenerationParams params;
};

struct CompletionResponse {
    std::string text;  // verbatim backend output (trailing newlines stripped for remote)
    std::map<std::string, std::string> backend_meta;
    bool cached = false;
};

struct BackendSpec {
    BackendKind kind = BackendKind::EchoMock;
    std::optional<std::string> endpoint;         // remote_api
    std::optional<std::string> credentials_env;  // remote_api
    // scripted_mock: exact prompt -> response.
    // template_mock: prompt prefix -> response template; "{rest}" in the
    // template is replaced by the prompt text after the prefix (longest
    // matching prefix wins).
    std::map<std::string, std::string> script;
    std::optional<std::size_t> max_prompt_chars;  // oversize prompts are rejected, never truncated

    static BackendSpec echo();
    static BackendSpec scripted(std::map<std::string, std::string> script);
    static BackendSpec template_mock(std::map<std::string, std::string> rules);
    static BackendSpec remote(std::string endpoint, std::string credentials_env);

    void validate() const;

    nlohmann::json to_json() const;
    static BackendSpec from_json(const nlohmann::json& j);
};

// Executes one completion request. Implementations throw Error on failure.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string run(const CompletionRequest& request) = 0;
    // How many times run() was entered; mocks use this to prove cache hits
    // never reach the backend.
    std::size_t calls() const { return calls_.load(); }

protected:
    void count_call() { calls_.fetch_add(1); }

private:
    std::atomic<std::size_t> calls_{0};
};

std::unique_ptr<Backend> make_backend(const BackendSpec& spec);

struct GatewayConfig {
    std::optional<std::filesystem::path> cache_dir;  // unset disables caching
    int max_attempts = 3;
    int backoff_base_ms = 1000;  // 1s, 2s, 4s
    int max_concurrency = 4;
};

// Thread-safe facade over the backends: prompt-size limits, transparent
// response caching, bounded retries for transient failures, and a cap on
// in-flight backend executions.
class Gateway {
public:
    Gateway() : Gateway(GatewayConfig{}) {}
    explicit Gateway(GatewayConfig config);

    CompletionResponse complete(const BackendSpec& spec, const CompletionRequest& request);
    // Same contract, but a caller-owned executor (tests inject counting or
    // blocking backends this way).
    CompletionResponse complete(const BackendSpec& spec, Backend& backend,
                                const CompletionRequest& request);

    // Stable digest over (kind, endpoint, model_id, prompt_text, params).
    static std::string cache_key(const BackendSpec& spec, const CompletionRequest& request);

    struct Stats {
        std::size_t backend_calls = 0;
        std::size_t cache_hits = 0;
    };
    Stats stats() const;

    const GatewayConfig& config() const { return config_; }

private:
    std::optional<std::string> cache_lookup(const std::string& key) const;
    void cache_store(const std::string& key, const std::string& text) const;
    std::string run_with_retries(Backend& backend, const CompletionRequest& request);
    Backend& backend_for(const BackendSpec& spec);

    GatewayConfig config_;
    mutable std::mutex mutex_;
    std::condition_variable slot_available_;
    int in_flight_ = 0;
    std::map<std::string, std::unique_ptr<Backend>> backends_;
    mutable Stats stats_;
};

}  // namespace promptsteal
