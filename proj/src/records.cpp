#include "promptsteal/records.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "promptsteal/errors.hpp"
#include "promptsteal/util.hpp"

namespace promptsteal {

using nlohmann::json;

std::string_view to_string(PromptType type) {
    switch (type) {
        case PromptType::Direct: return "direct";
        case PromptType::RoleBased: return "role_based";
        case PromptType::InContext: return "in_context";
    }
    return "direct";
}

PromptType prompt_type_from_string(std::string_view name) {
    if (name == "direct") return PromptType::Direct;
    if (name == "role_based") return PromptType::RoleBased;
    if (name == "in_context") return PromptType::InContext;
    throw Error(ErrorCode::InvalidArgument, "unknown prompt type: " + std::string(name));
}

std::string_view to_string(Split split) {
    return split == Split::Train ? "train" : "test";
}

Split split_from_string(std::string_view name) {
    if (name == "train") return Split::Train;
    if (name == "test") return Split::Test;
    throw Error(ErrorCode::InvalidArgument, "unknown split: " + std::string(name));
}

const std::vector<Role>& canonical_roles() {
    static const std::vector<Role> roles = {
        {"Science Information Provider", "Provides information on scientific topics and research"},
        {"Media Information Provider", "Offers information about news, events, and entertainment"},
        {"Ethical/Sex Information Provider", "Provides information on ethical or sexual topics"},
        {"Legal Advisor", "Provides information on legal matters"},
        {"Research Analyst", "Helps researchers analyze and present experiment results"},
        {"Movie/Artwork Advisor", "Recommends movies or other artworks based on preferences"},
        {"Education Information Provider", "Provides information or resources on education topics"},
        {"Political Information Provider", "Helps analyze information about political events and issues"},
        {"Customer Support", "Assists customers with inquiries and support matters"},
        {"Translator", "Translates one language into another"},
        {"Financial Advisor", "Offers financial advice and guidance"},
        {"Health Information Provider", "Provides information on health-related topics"},
        {"History/Cultural Information Provider", "Offers information about historical and cultural subjects"},
        {"Fact Checker", "Verifies and confirms the accuracy of information"},
        {"Sports Analyst", "Helps people understand sport-related events and data"},
    };
    return roles;
}

std::optional<Role> find_canonical_role(std::string_view name) {
    for (const Role& role : canonical_roles()) {
        if (role.name == name) return role;
    }
    return std::nullopt;
}

int canonical_role_index(std::string_view name) {
    const auto& roles = canonical_roles();
    for (std::size_t i = 0; i < roles.size(); ++i) {
        if (roles[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

namespace {

// Lowercase, non-alphanumerics collapsed to single spaces, trimmed.
std::string normalize_role_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
        } else if (!out.empty() && out.back() != ' ') {
            out.push_back(' ');
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

}  // namespace

Role match_role_response(std::string_view response) {
    const std::string normalized = normalize_role_text(response);
    if (normalized.empty()) {
        throw Error(ErrorCode::UnparseableRoleResponse, "empty role response");
    }
    const auto& roles = canonical_roles();
    for (const Role& role : roles) {
        if (normalize_role_text(role.name) == normalized) return role;
    }
    const Role* unique = nullptr;
    for (const Role& role : roles) {
        if (normalized.find(normalize_role_text(role.name)) != std::string::npos) {
            if (unique != nullptr) {
                throw Error(ErrorCode::UnparseableRoleResponse,
                            "response names several roles: " + std::string(response));
            }
            unique = &role;
        }
    }
    if (unique == nullptr) {
        throw Error(ErrorCode::UnparseableRoleResponse,
                    "response names no canonical role: " + std::string(response));
    }
    return *unique;
}

std::string role_preamble(std::string_view role_name) {
    return "Assume you are a " + std::string(role_name) + ". ";
}

std::optional<std::string> parse_role_preamble(std::string_view text) {
    constexpr std::string_view kPrefix = "Assume you are a ";
    if (!starts_with(text, kPrefix)) return std::nullopt;
    std::string_view rest = text.substr(kPrefix.size());
    std::size_t end = rest.find(". ");
    if (end == std::string_view::npos || end == 0) return std::nullopt;
    return std::string(rest.substr(0, end));
}

std::string context_block(const QAPair& pair) {
    return "Q: " + pair.question + "\nA: " + pair.answer + "\n\n";
}

std::string compose_role_based_text(const Role& role, std::string_view question) {
    return role_preamble(role.name) + std::string(question);
}

std::string compose_in_context_text(const std::vector<QAPair>& items, std::string_view question) {
    std::string text;
    for (const QAPair& pair : items) {
        text += context_block(pair);
    }
    text += question;
    return text;
}

std::vector<std::string> validate_prompt_record(const PromptRecord& record) {
    std::vector<std::string> violations;
    if (record.id.empty()) violations.push_back("id-empty");
    if (trim(record.base_question).empty()) violations.push_back("base-question-empty");

    switch (record.prompt_type) {
        case PromptType::Direct:
            if (record.role.has_value()) violations.push_back("role-on-direct");
            if (record.context_items.has_value()) violations.push_back("context-on-direct");
            if (record.text != record.base_question) violations.push_back("direct-text-mismatch");
            break;
        case PromptType::RoleBased:
            if (!record.role.has_value()) {
                violations.push_back("role-missing");
            } else {
                if (canonical_role_index(record.role->name) < 0) violations.push_back("role-unknown");
                if (record.text != compose_role_based_text(*record.role, record.base_question)) {
                    violations.push_back("role-text-mismatch");
                }
            }
            if (record.context_items.has_value()) violations.push_back("context-on-role-based");
            break;
        case PromptType::InContext:
            if (record.role.has_value()) violations.push_back("role-on-in-context");
            if (!record.context_items.has_value()) {
                violations.push_back("context-missing");
            } else {
                const auto& items = *record.context_items;
                if (items.empty() || items.size() > 4) violations.push_back("context-count-range");
                for (const QAPair& pair : items) {
                    if (trim(pair.question).empty() || trim(pair.answer).empty()) {
                        violations.push_back("context-pair-empty");
                        break;
                    }
                }
                if (record.text != compose_in_context_text(items, record.base_question)) {
                    violations.push_back("context-text-mismatch");
                }
            }
            break;
    }
    return violations;
}

namespace {

bool is_probability_vector(const std::vector<double>& scores, std::size_t expected) {
    if (scores.size() != expected) return false;
    double sum = 0.0;
    for (double s : scores) {
        if (!(s >= 0.0) || !std::isfinite(s)) return false;
        sum += s;
    }
    return std::abs(sum - 1.0) <= 1e-6;
}

int argmax_index(const std::vector<double>& scores) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(scores.size()); ++i) {
        if (scores[i] > scores[best]) best = i;  // ties keep the lowest index
    }
    return best;
}

}  // namespace

std::vector<std::string> validate_extraction_result(const ExtractionResult& result) {
    std::vector<std::string> violations;
    if (!is_probability_vector(result.type_scores, 3)) {
        violations.push_back("type-scores-invalid");
    } else if (argmax_index(result.type_scores) != static_cast<int>(result.predicted_type)) {
        violations.push_back("type-not-argmax");
    }

    const bool role_expected = result.predicted_type == PromptType::RoleBased;
    if (result.predicted_role.has_value() != role_expected) violations.push_back("role-presence");
    if (result.role_scores.has_value() != role_expected) violations.push_back("role-scores-presence");
    if (result.predicted_role && result.role_scores) {
        if (!is_probability_vector(*result.role_scores, 15)) {
            violations.push_back("role-scores-invalid");
        } else {
            int idx = canonical_role_index(result.predicted_role->name);
            if (idx < 0 || idx != argmax_index(*result.role_scores)) {
                violations.push_back("role-not-argmax");
            }
        }
    }

    const bool context_expected = result.predicted_type == PromptType::InContext;
    if (result.predicted_context_count.has_value() != context_expected) {
        violations.push_back("context-count-presence");
    }
    if (result.context_scores.has_value() != context_expected) {
        violations.push_back("context-scores-presence");
    }
    if (result.predicted_context_count && result.context_scores) {
        if (*result.predicted_context_count < 1 || *result.predicted_context_count > 4) {
            violations.push_back("context-count-range");
        }
        if (!is_probability_vector(*result.context_scores, 4)) {
            violations.push_back("context-scores-invalid");
        } else if (*result.predicted_context_count != argmax_index(*result.context_scores) + 1) {
            violations.push_back("context-not-argmax");
        }
    }
    return violations;
}

std::vector<std::string> validate_reversed_prompt(const ReversedPrompt& reversed) {
    std::vector<std::string> violations = validate_extraction_result(reversed.extraction);
    switch (reversed.extraction.predicted_type) {
        case PromptType::Direct:
            if (reversed.assembled_text != reversed.naive_text) {
                violations.push_back("direct-assembly-mismatch");
            }
            if (reversed.generated_contexts.has_value()) {
                violations.push_back("contexts-on-direct-reversal");
            }
            break;
        case PromptType::RoleBased: {
            std::string expected;
            if (reversed.extraction.predicted_role) {
                expected = role_preamble(reversed.extraction.predicted_role->name) + reversed.naive_text;
            }
            if (expected.empty() || reversed.assembled_text != expected) {
                violations.push_back("role-assembly-mismatch");
            }
            if (reversed.generated_contexts.has_value()) {
                violations.push_back("contexts-on-role-reversal");
            }
            break;
        }
        case PromptType::InContext: {
            if (!reversed.generated_contexts.has_value()) {
                violations.push_back("generated-contexts-missing");
                break;
            }
            const auto& contexts = *reversed.generated_contexts;
            if (reversed.extraction.predicted_context_count &&
                static_cast<int>(contexts.size()) != *reversed.extraction.predicted_context_count) {
                violations.push_back("generated-context-count");
            }
            if (reversed.assembled_text != compose_in_context_text(contexts, reversed.naive_text)) {
                violations.push_back("context-assembly-mismatch");
            }
            break;
        }
    }
    return violations;
}

std::string prompt_record_id(std::string_view source, std::string_view base_question,
                             PromptType type, std::string_view role_name,
                             const std::vector<QAPair>* context_items) {
    std::string material = "prompt\x1f";
    material += source;
    material += '\x1f';
    material += base_question;
    material += '\x1f';
    material += to_string(type);
    material += '\x1f';
    material += role_name;
    if (context_items != nullptr) {
        for (const QAPair& pair : *context_items) {
            material += '\x1f';
            material += sha256_hex(pair.question + "\x1f" + pair.answer).substr(0, 16);
        }
    }
    return sha256_hex(material).substr(0, 16);
}

std::string answer_record_id(std::string_view prompt_id, std::string_view model_id,
                             const std::map<std::string, std::string>& generation_params,
                             std::string_view variant) {
    std::string material = "answer\x1f";
    material += prompt_id;
    material += '\x1f';
    material += model_id;
    for (const auto& [key, value] : generation_params) {
        material += '\x1f';
        material += key;
        material += '=';
        material += value;
    }
    material += '\x1f';
    material += variant;
    return sha256_hex(material).substr(0, 16);
}

nlohmann::json to_json(const Role& role) {
    return json{{"name", role.name}, {"description", role.description}};
}

nlohmann::json to_json(const QAPair& pair) {
    return json{{"question", pair.question}, {"answer", pair.answer}};
}

nlohmann::json to_json(const PromptRecord& record) {
    json j;
    j["id"] = record.id;
    j["text"] = record.text;
    j["prompt_type"] = std::string(to_string(record.prompt_type));
    j["role"] = record.role ? json(record.role->name) : json(nullptr);
    if (record.context_items) {
        json items = json::array();
        for (const QAPair& pair : *record.context_items) items.push_back(to_json(pair));
        j["context_items"] = items;
    } else {
        j["context_items"] = nullptr;
    }
    j["base_question"] = record.base_question;
    j["source"] = record.source;
    j["split"] = std::string(to_string(record.split));
    return j;
}

nlohmann::json to_json(const AnswerRecord& record) {
    json j;
    j["id"] = record.id;
    j["prompt_id"] = record.prompt_id;
    j["model_id"] = record.model_id;
    j["answer_text"] = record.answer_text;
    j["generation_params"] = record.generation_params;
    j["created_at"] = record.created_at;
    return j;
}

nlohmann::json to_json(const ExtractionResult& result) {
    json j;
    j["predicted_type"] = std::string(to_string(result.predicted_type));
    j["type_scores"] = result.type_scores;
    j["predicted_role"] = result.predicted_role ? json(result.predicted_role->name) : json(nullptr);
    j["role_scores"] = result.role_scores ? json(*result.role_scores) : json(nullptr);
    j["predicted_context_count"] =
        result.predicted_context_count ? json(*result.predicted_context_count) : json(nullptr);
    j["context_scores"] = result.context_scores ? json(*result.context_scores) : json(nullptr);
    return j;
}

nlohmann::json to_json(const ReversedPrompt& reversed) {
    json j;
    j["answer_id"] = reversed.answer_id;
    j["naive_text"] = reversed.naive_text;
    j["assembled_text"] = reversed.assembled_text;
    j["extraction"] = to_json(reversed.extraction);
    if (reversed.generated_contexts) {
        json items = json::array();
        for (const QAPair& pair : *reversed.generated_contexts) items.push_back(to_json(pair));
        j["generated_contexts"] = items;
    } else {
        j["generated_contexts"] = nullptr;
    }
    return j;
}

namespace {

const json& require_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw Error(ErrorCode::InvalidArgument, std::string("missing field: ") + key);
    }
    return *it;
}

}  // namespace

Role role_from_json(const nlohmann::json& j) {
    Role role;
    role.name = require_field(j, "name").get<std::string>();
    role.description = require_field(j, "description").get<std::string>();
    return role;
}

QAPair qa_pair_from_json(const nlohmann::json& j) {
    QAPair pair;
    pair.question = require_field(j, "question").get<std::string>();
    pair.answer = require_field(j, "answer").get<std::string>();
    return pair;
}

namespace {

// Role serialized as the bare name; the description is restored from the
// canonical table (absent names round-trip with an empty description).
Role role_from_name(const std::string& name) {
    if (auto canonical = find_canonical_role(name)) return *canonical;
    return Role{name, ""};
}

}  // namespace

PromptRecord prompt_record_from_json(const nlohmann::json& j) {
    PromptRecord record;
    record.id = require_field(j, "id").get<std::string>();
    record.text = require_field(j, "text").get<std::string>();
    record.prompt_type = prompt_type_from_string(require_field(j, "prompt_type").get<std::string>());
    const json& role = require_field(j, "role");
    if (!role.is_null()) record.role = role_from_name(role.get<std::string>());
    const json& items = require_field(j, "context_items");
    if (!items.is_null()) {
        std::vector<QAPair> pairs;
        for (const json& item : items) pairs.push_back(qa_pair_from_json(item));
        record.context_items = std::move(pairs);
    }
    record.base_question = require_field(j, "base_question").get<std::string>();
    record.source = require_field(j, "source").get<std::string>();
    record.split = split_from_string(require_field(j, "split").get<std::string>());
    return record;
}

AnswerRecord answer_record_from_json(const nlohmann::json& j) {
    AnswerRecord record;
    record.id = require_field(j, "id").get<std::string>();
    record.prompt_id = require_field(j, "prompt_id").get<std::string>();
    record.model_id = require_field(j, "model_id").get<std::string>();
    record.answer_text = require_field(j, "answer_text").get<std::string>();
    record.generation_params =
        require_field(j, "generation_params").get<std::map<std::string, std::string>>();
    record.created_at = require_field(j, "created_at").get<std::string>();
    return record;
}

ExtractionResult extraction_result_from_json(const nlohmann::json& j) {
    ExtractionResult result;
    result.predicted_type =
        prompt_type_from_string(require_field(j, "predicted_type").get<std::string>());
    result.type_scores = require_field(j, "type_scores").get<std::vector<double>>();
    const json& role = require_field(j, "predicted_role");
    if (!role.is_null()) result.predicted_role = role_from_name(role.get<std::string>());
    const json& role_scores = require_field(j, "role_scores");
    if (!role_scores.is_null()) result.role_scores = role_scores.get<std::vector<double>>();
    const json& count = require_field(j, "predicted_context_count");
    if (!count.is_null()) result.predicted_context_count = count.get<int>();
    const json& context_scores = require_field(j, "context_scores");
    if (!context_scores.is_null()) result.context_scores = context_scores.get<std::vector<double>>();
    return result;
}

ReversedPrompt reversed_prompt_from_json(const nlohmann::json& j) {
    ReversedPrompt reversed;
    reversed.answer_id = require_field(j, "answer_id").get<std::string>();
    reversed.naive_text = require_field(j, "naive_text").get<std::string>();
    reversed.assembled_text = require_field(j, "assembled_text").get<std::string>();
    reversed.extraction = extraction_result_from_json(require_field(j, "extraction"));
    const json& contexts = require_field(j, "generated_contexts");
    if (!contexts.is_null()) {
        std::vector<QAPair> pairs;
        for (const json& item : contexts) pairs.push_back(qa_pair_from_json(item));
        reversed.generated_contexts = std::move(pairs);
    }
    return reversed;
}

namespace {

template <typename T>
std::string records_to_jsonl(const std::vector<T>& records) {
    std::string out;
    for (const T& record : records) {
        out += to_json(record).dump();
        out += '\n';
    }
    return out;
}

template <typename T, typename Parser>
std::vector<T> records_from_jsonl(std::string_view text, Parser parse) {
    std::vector<T> records;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw Error(ErrorCode::InvalidArgument, "malformed JSONL line");
        }
        records.push_back(parse(j));
    }
    return records;
}

}  // namespace

std::string to_jsonl(const std::vector<PromptRecord>& records) { return records_to_jsonl(records); }
std::string to_jsonl(const std::vector<AnswerRecord>& records) { return records_to_jsonl(records); }

std::vector<PromptRecord> prompt_records_from_jsonl(std::string_view text) {
    return records_from_jsonl<PromptRecord>(text, prompt_record_from_json);
}

std::vector<AnswerRecord> answer_records_from_jsonl(std::string_view text) {
    return records_from_jsonl<AnswerRecord>(text, answer_record_from_json);
}

std::string canonical_roles_json() {
    json arr = json::array();
    for (const Role& role : canonical_roles()) arr.push_back(to_json(role));
    return arr.dump(2) + "\n";
}

}  // namespace promptsteal
