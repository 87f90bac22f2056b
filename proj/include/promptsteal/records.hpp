#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace promptsteal {

// The three prompt populations the attack distinguishes.
enum class PromptType { Direct, RoleBased, InContext };

std::string_view to_string(PromptType type);
PromptType prompt_type_from_string(std::string_view name);

enum class Split { Train, Test };
std::string_view to_string(Split split);
Split split_from_string(std::string_view name);

struct Role {
    std::string name;
    std::string description;

    bool operator==(const Role& other) const { return name == other.name; }
};

// The fixed 15-role vocabulary, in table order. Stable across calls.
const std::vector<Role>& canonical_roles();
std::optional<Role> find_canonical_role(std::string_view name);
// Index of a canonical role name in canonical_roles(), or -1.
int canonical_role_index(std::string_view name);

// Maps a free-form backend response to a canonical role: lowercase, strip
// punctuation, then exact or unique-substring match. Throws
// UnparseableRoleResponse when zero or several roles match.
Role match_role_response(std::string_view response);

struct QAPair {
    std::string question;
    std::string answer;

    bool operator==(const QAPair& other) const = default;
};

// --- shared prompt grammar ---
// One grammar is used by both the dataset builder and the reconstructor so
// built prompts and reversed prompts are structurally comparable.

// "Assume you are a {role}. "
std::string role_preamble(std::string_view role_name);
// Inverse of role_preamble: the role name if `text` starts with the preamble.
std::optional<std::string> parse_role_preamble(std::string_view text);
// "Q: {q}\nA: {a}\n\n"
std::string context_block(const QAPair& pair);
std::string compose_role_based_text(const Role& role, std::string_view question);
std::string compose_in_context_text(const std::vector<QAPair>& items, std::string_view question);

struct PromptRecord {
    std::string id;
    std::string text;  // the full prompt as sent to the model
    PromptType prompt_type = PromptType::Direct;
    std::optional<Role> role;                        // iff RoleBased
    std::optional<std::vector<QAPair>> context_items;  // iff InContext, 1..4 items
    std::string base_question;
    std::string source;
    Split split = Split::Train;

    bool operator==(const PromptRecord& other) const = default;
};

struct AnswerRecord {
    std::string id;
    std::string prompt_id;
    std::string model_id;
    std::string answer_text;
    std::map<std::string, std::string> generation_params;
    std::string created_at;  // ISO-8601 UTC

    bool operator==(const AnswerRecord& other) const = default;
};

struct ExtractionResult {
    PromptType predicted_type = PromptType::Direct;
    std::vector<double> type_scores;                    // 3 entries
    std::optional<Role> predicted_role;                 // iff RoleBased
    std::optional<std::vector<double>> role_scores;     // 15 entries
    std::optional<int> predicted_context_count;         // iff InContext, 1..4
    std::optional<std::vector<double>> context_scores;  // 4 entries
};

struct ReversedPrompt {
    std::string answer_id;
    std::string naive_text;      // direct reversal from the backend
    std::string assembled_text;  // final reversed prompt
    ExtractionResult extraction;
    std::optional<std::vector<QAPair>> generated_contexts;
};

// --- validation ---
// Violations are data, not failures: each violated invariant is reported by
// a stable name; empty result means the record is valid.

std::vector<std::string> validate_prompt_record(const PromptRecord& record);
std::vector<std::string> validate_extraction_result(const ExtractionResult& result);
std::vector<std::string> validate_reversed_prompt(const ReversedPrompt& reversed);

// --- content-addressed ids ---
// Rebuilding the same dataset yields the same ids, which makes runs idempotent.

std::string prompt_record_id(std::string_view source, std::string_view base_question,
                             PromptType type, std::string_view role_name,
                             const std::vector<QAPair>* context_items);
std::string answer_record_id(std::string_view prompt_id, std::string_view model_id,
                             const std::map<std::string, std::string>& generation_params,
                             std::string_view variant = "");

// --- JSON / JSONL ---

nlohmann::json to_json(const Role& role);
nlohmann::json to_json(const QAPair& pair);
nlohmann::json to_json(const PromptRecord& record);
nlohmann::json to_json(const AnswerRecord& record);
nlohmann::json to_json(const ExtractionResult& result);
nlohmann::json to_json(const ReversedPrompt& reversed);

Role role_from_json(const nlohmann::json& j);
QAPair qa_pair_from_json(const nlohmann::json& j);
PromptRecord prompt_record_from_json(const nlohmann::json& j);
AnswerRecord answer_record_from_json(const nlohmann::json& j);
ExtractionResult extraction_result_from_json(const nlohmann::json& j);
ReversedPrompt reversed_prompt_from_json(const nlohmann::json& j);

std::string to_jsonl(const std::vector<PromptRecord>& records);
std::string to_jsonl(const std::vector<AnswerRecord>& records);
std::vector<PromptRecord> prompt_records_from_jsonl(std::string_view text);
std::vector<AnswerRecord> answer_records_from_jsonl(std::string_view text);

// Canonical serialization of the role vocabulary (for the persisted fixture).
std::string canonical_roles_json();

}  // namespace promptsteal
