#include "semzip/decoder.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "semzip/sha256.hpp"
#include "semzip/stub.hpp"

namespace semzip {

using nlohmann::json;

Result<std::string> load_prompt_template(const std::string& path) {
    auto text = read_file(path);
    if (!text) return text.error();
    auto hash = sha256_hex(*text);
    if (hash != kPromptTemplateSha256)
        return err("prompt template integrity check failed for " + path + " (sha256 " + hash +
                   "); refusing to run with a modified template");
    return *text;
}

Result<std::string> render_prompt(const std::string& template_text, const std::string& payload) {
    if (payload.empty()) return err("representation payload is empty");
    auto pos = template_text.find(kPromptPlaceholder);
    if (pos == std::string::npos)
        return err("prompt template is missing the " + std::string(kPromptPlaceholder) + " placeholder");
    std::string out = template_text;
    out.replace(pos, kPromptPlaceholder.size(), payload);
    return out;
}

Result<std::string> export_prompts(const std::vector<CaseRecord>& cases,
                                   const std::vector<Regime>& regimes,
                                   const std::string& template_text) {
    std::string out;
    std::size_t n = 0;
    std::string records;
    for (const auto& c : cases) {
        for (Regime r : regimes) {
            auto it = c.representations.find(r);
            if (it == c.representations.end()) continue;
            auto prompt = render_prompt(template_text, it->second.payload);
            if (!prompt) return err(c.case_id + "/" + std::string(to_string(r)) + ": " + prompt.error().message);
            json rec;
            rec["case_id"] = c.case_id;
            rec["regime"] = std::string(to_string(r));
            rec["prompt"] = *prompt;
            records += rec.dump() + "\n";
            ++n;
        }
    }
    json header;
    header["format"] = "semzip-prompts/1";
    header["records"] = n;
    out = header.dump() + "\n" + records;
    return out;
}

Result<std::vector<PromptRecord>> parse_prompt_batch(const std::string& jsonl) {
    std::vector<PromptRecord> out;
    int line_no = 0;
    for (const auto& line : split(jsonl, '\n')) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) return err("malformed batch record", line_no);
        if (!j.contains("case_id")) continue;  // header / comment records
        PromptRecord r;
        r.case_id = j.value("case_id", "");
        r.regime = j.value("regime", "");
        r.prompt = j.value("prompt", "");
        if (r.case_id.empty() || r.regime.empty() || r.prompt.empty())
            return err("batch record missing case_id/regime/prompt", line_no);
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

struct EndpointParts {
    std::string base;  // scheme://host[:port]
    std::string path_prefix;
};

Result<EndpointParts> split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
        return err("endpoint must be 'stub' or an http(s)://host[:port] address: " + endpoint);
    auto path_start = endpoint.find('/', scheme_end + 3);
    EndpointParts p;
    if (path_start == std::string::npos) {
        p.base = endpoint;
    } else {
        p.base = endpoint.substr(0, path_start);
        p.path_prefix = endpoint.substr(path_start);
        while (!p.path_prefix.empty() && p.path_prefix.back() == '/') p.path_prefix.pop_back();
    }
    return p;
}

}  // namespace

Result<ChatTransport> make_transport(const DecoderConfig& config, const CodecTables& tables) {
    if (config.endpoint == "stub") {
        const CodecTables* t = &tables;
        return ChatTransport([t](const std::string& request_body) -> Result<ChatReply> {
            return ChatReply{200, stub_chat_completion(request_body, *t)};
        });
    }
    auto parts = split_endpoint(config.endpoint);
    if (!parts) return parts.error();
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key)
        return err("auth: environment variable " + config.api_key_env + " is not set");

    std::string base = parts->base;
    std::string path = parts->path_prefix + "/v1/chat/completions";
    std::string bearer = std::string("Bearer ") + key;
    int timeout_ms = config.timeout_ms;
    return ChatTransport([base, path, bearer, timeout_ms](const std::string& body) -> Result<ChatReply> {
        httplib::Client cli(base);
        cli.set_connection_timeout(std::chrono::milliseconds(timeout_ms));
        cli.set_read_timeout(std::chrono::milliseconds(timeout_ms));
        httplib::Headers headers = {{"Authorization", bearer}};
        auto res = cli.Post(path, headers, body, "application/json");
        if (!res) return err("transport error: " + httplib::to_string(res.error()));
        return ChatReply{res->status, res->body};
    });
}

namespace {

struct Extracted {
    std::string content;
    std::string model;
};

Result<Extracted> extract_completion(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) return err("response body is not JSON");
    Extracted e;
    e.model = j.value("model", "");
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        return err("response has no choices");
    const auto& msg = j["choices"][0];
    if (!msg.contains("message") || !msg["message"].contains("content") ||
        !msg["message"]["content"].is_string())
        return err("response choice has no message content");
    e.content = msg["message"]["content"].get<std::string>();
    return e;
}

}  // namespace

Result<std::vector<DecodeRecord>> decode_batch(const std::vector<PromptRecord>& batch,
                                               const DecoderConfig& config,
                                               const ChatTransport& transport,
                                               const std::function<void(const DecodeRecord&)>& on_record) {
    if (!config.unsafe_sampling && (config.temperature != 0.0 || config.top_p != 1.0))
        return err("sampling is pinned to temperature=0, top_p=1.0; pass --unsafe-sampling to override");

    std::vector<DecodeRecord> records(batch.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort_auth{false};
    std::string auth_message;
    std::mutex mu;

    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= batch.size() || abort_auth.load()) return;
            const PromptRecord& pr = batch[i];
            DecodeRecord rec;
            rec.case_id = pr.case_id;
            rec.regime = pr.regime;
            rec.prompt = pr.prompt;
            rec.request_ms = now_ms();

            json req;
            req["model"] = config.model;
            req["messages"] = json::array({json{{"role", "user"}, {"content", pr.prompt}}});
            req["temperature"] = config.temperature;
            req["top_p"] = config.top_p;
            req["max_tokens"] = config.max_output_tokens;
            std::string body = req.dump();

            int attempt = 0;
            while (true) {
                ++attempt;
                rec.attempts = attempt;
                auto reply = transport(body);
                if (!reply) {
                    if (attempt < config.retry.max_attempts) {
                        std::this_thread::sleep_for(std::chrono::milliseconds(
                            config.retry.backoff_ms * (1 << (attempt - 1))));
                        continue;
                    }
                    rec.failed = true;
                    rec.failure = "transport: " + reply.error().message;
                    break;
                }
                if (reply->status == 401 || reply->status == 403) {
                    std::lock_guard<std::mutex> lock(mu);
                    abort_auth.store(true);
                    auth_message = "authentication failed (HTTP " + std::to_string(reply->status) + ")";
                    return;
                }
                if (reply->status == 429 || reply->status >= 500) {
                    if (attempt < config.retry.max_attempts) {
                        std::this_thread::sleep_for(std::chrono::milliseconds(
                            config.retry.backoff_ms * (1 << (attempt - 1))));
                        continue;
                    }
                    rec.failed = true;
                    rec.failure = "HTTP " + std::to_string(reply->status) + " after " +
                                  std::to_string(attempt) + " attempts";
                    rec.raw_response = reply->body;
                    break;
                }
                if (reply->status != 200) {
                    rec.failed = true;
                    rec.failure = "HTTP " + std::to_string(reply->status);
                    rec.raw_response = reply->body;
                    break;
                }
                auto extracted = extract_completion(reply->body);
                if (!extracted) {
                    rec.failed = true;
                    rec.failure = extracted.error().message;
                    rec.raw_response = reply->body;
                    break;
                }
                rec.raw_response = extracted->content;  // archived byte-exact
                rec.model_echoed = extracted->model;
                auto parsed = parse_decoder_output(rec.raw_response, config.strict_json);
                if (!parsed) {
                    rec.failed = true;
                    rec.failure = "parse: " + parsed.error().message;
                } else {
                    rec.atoms = std::move(parsed->atoms);
                    rec.dropped_atoms = parsed->dropped;
                }
                break;
            }
            rec.response_ms = now_ms();
            {
                std::lock_guard<std::mutex> lock(mu);
                if (on_record) on_record(rec);
            }
            records[i] = std::move(rec);
        }
    };

    int n_threads = std::max(1, std::min<int>(config.parallelism, static_cast<int>(batch.size())));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (abort_auth.load()) return err(auth_message);
    return records;
}

namespace {

// Finds the matching close brace, honoring JSON strings and escapes.
std::size_t match_brace(const std::string& s, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '{') ++depth;
        else if (c == '}' && --depth == 0) return i;
    }
    return std::string::npos;
}

Result<SemanticAtom> atom_from_json(const json& j, const AliasTable& table) {
    if (!j.is_object()) return err("atom is not an object");
    SemanticAtom a;

    if (!j.contains("subject") || !j["subject"].is_string()) return err("missing subject");
    a.subject = normalize_text(j["subject"].get<std::string>());
    if (a.subject.empty()) return err("subject normalizes to nothing");

    if (!j.contains("type") || !j["type"].is_string()) return err("missing type");
    auto ty = parse_atom_type(normalize_text(j["type"].get<std::string>()));
    if (!ty) return err("unknown type: " + j["type"].get<std::string>());
    a.type = *ty;

    if (!j.contains("predicate") || !j["predicate"].is_string()) return err("missing predicate");
    std::string pred = normalize_text(j["predicate"].get<std::string>());
    auto p = parse_predicate(pred);
    if (!p) p = parse_predicate(apply_aliases(pred, table, FieldClass::Predicate));
    if (!p) return err("unknown predicate: " + pred);
    a.predicate = *p;

    if (!j.contains("value")) return err("missing value");
    const json& v = j["value"];
    if (v.is_string()) a.value = Value::text(v.get<std::string>());
    else if (v.is_boolean()) a.value = Value::boolean(v.get<bool>());
    else if (v.is_number()) a.value = Value::number(v.dump());
    else if (v.is_array()) {
        std::vector<std::string> items;
        for (const auto& el : v) {
            if (el.is_string()) items.push_back(el.get<std::string>());
            else if (el.is_number() || el.is_boolean()) items.push_back(el.dump());
            else return err("list value element is not scalar");
        }
        if (items.empty()) return err("empty list value");
        a.value = Value::list(std::move(items));
    } else {
        return err("value is not a scalar or list");
    }

    // unknown members exist for modality and scope; unknown surface forms
    // fold onto them instead of failing the atom
    a.modality = Modality::Unknown;
    if (j.contains("modality") && j["modality"].is_string())
        if (auto m = parse_modality(normalize_text(j["modality"].get<std::string>()))) a.modality = *m;
    a.scope = Scope::Unknown;
    if (j.contains("scope") && j["scope"].is_string())
        if (auto sc = parse_scope(normalize_text(j["scope"].get<std::string>()))) a.scope = *sc;

    if (j.contains("evidence") && j["evidence"].is_string()) a.evidence = j["evidence"].get<std::string>();
    if (j.contains("confidence") && j["confidence"].is_number()) {
        double c = j["confidence"].get<double>();
        if (c >= 0.0 && c <= 1.0) a.confidence = c;
    }
    if (j.contains("risk") && j["risk"].is_string())
        if (auto r = parse_risk(normalize_text(j["risk"].get<std::string>()))) a.risk = *r;

    auto rep = validate_atom(a);
    if (!rep.ok()) return err(rep.to_string());
    return a;
}

}  // namespace

Result<ParsedDecoderOutput> parse_decoder_output(const std::string& raw, bool strict,
                                                 const AliasTable& table) {
    json root;
    if (strict) {
        root = json::parse(std::string(trim(raw)), nullptr, false);
        if (root.is_discarded() || !root.is_object() || !root.contains("atoms") ||
            !root["atoms"].is_array())
            return err("strict mode: output is not a bare JSON object with an atoms array");
    } else {
        bool found = false;
        for (std::size_t pos = raw.find('{'); pos != std::string::npos; pos = raw.find('{', pos + 1)) {
            auto close = match_brace(raw, pos);
            if (close == std::string::npos) break;
            json candidate = json::parse(raw.substr(pos, close - pos + 1), nullptr, false);
            if (!candidate.is_discarded() && candidate.is_object() && candidate.contains("atoms") &&
                candidate["atoms"].is_array()) {
                root = std::move(candidate);
                found = true;
                break;
            }
        }
        if (!found) return err("no JSON object with an atoms array found in decoder output");
    }

    ParsedDecoderOutput out;
    for (const auto& el : root["atoms"]) {
        auto a = atom_from_json(el, table);
        if (a)
            out.atoms.push_back(std::move(*a));
        else
            ++out.dropped;
    }
    return out;
}

}  // namespace semzip
