#include "semzip/stub.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "semzip/normalize.hpp"

namespace semzip {

using nlohmann::json;

namespace {

std::string snake(const std::string& words) { return normalize_text(words); }

void add_atom(std::vector<SemanticAtom>& out, const CodecTables::FieldSpec* f, Value v) {
    SemanticAtom a;
    if (f) {
        a.type = f->type;
        a.subject = f->subject;
        a.predicate = f->predicate;
        a.modality = f->modality;
        a.scope = f->scope;
    }
    a.value = std::move(v);
    out.push_back(std::move(a));
}

// Inverse of the prose template: one clause per atom, joined by "; ".
std::vector<SemanticAtom> parse_prose(const std::string& payload, const CodecTables& tables) {
    std::vector<SemanticAtom> out;
    std::string text = payload;
    while (!text.empty() && (text.back() == '.' || is_ascii_space(text.back()))) text.pop_back();
    for (auto& raw : split(text, ';')) {
        std::string clause = to_lower_ascii(trim(raw));
        if (clause.empty()) continue;

        auto value_for = [&](const CodecTables::FieldSpec& f,
                             const std::string& val_words) -> std::optional<Value> {
            using Domain = CodecTables::FieldSpec::Domain;
            switch (f.domain) {
                case Domain::Number: {
                    auto lex = std::string(trim(val_words));
                    if (!parse_double(lex)) return std::nullopt;
                    return Value::number(lex);
                }
                case Domain::List: {
                    std::vector<std::string> items;
                    for (const auto& part : split(val_words, ','))
                        if (auto tok = snake(part); !tok.empty()) items.push_back(tok);
                    if (items.empty()) return std::nullopt;
                    return Value::list(items);
                }
                default: {
                    auto tok = snake(val_words);
                    if (tok.empty()) return std::nullopt;
                    return Value::text(tok);
                }
            }
        };

        if (clause.rfind("no ", 0) == 0) {
            std::string subject = snake(clause.substr(3));
            const auto* f = tables.field_by_subject(subject);
            if (f && f->domain == CodecTables::FieldSpec::Domain::Flag)
                add_atom(out, f, Value::boolean(false));
            else {
                SemanticAtom a;
                a.type = AtomType::Constraint;
                a.subject = subject;
                a.predicate = Predicate::Allowed;
                a.value = Value::boolean(false);
                a.modality = Modality::Must;
                out.push_back(std::move(a));
            }
            continue;
        }
        if (auto pos = clause.find(" must include "); clause.rfind("the ", 0) == 0 && pos != std::string::npos) {
            std::string subject = snake(clause.substr(4, pos - 4));
            const auto* f = tables.field_by_subject(subject);
            if (!f) continue;
            if (auto v = value_for(*f, clause.substr(pos + 14))) add_atom(out, f, std::move(*v));
            continue;
        }
        if (auto pos = clause.find(" is "); clause.rfind("the ", 0) == 0 && pos != std::string::npos) {
            std::string subject = snake(clause.substr(4, pos - 4));
            const auto* f = tables.field_by_subject(subject);
            if (!f) continue;
            if (auto v = value_for(*f, clause.substr(pos + 4))) add_atom(out, f, std::move(*v));
            continue;
        }
        if (auto pos = clause.find(" for "); clause.rfind("prefer ", 0) == 0 && pos != std::string::npos) {
            std::string subject = snake(clause.substr(pos + 5));
            const auto* f = tables.field_by_subject(subject);
            if (!f) continue;
            if (auto v = value_for(*f, clause.substr(7, pos - 7))) add_atom(out, f, std::move(*v));
            continue;
        }
        if (auto pos = clause.find(": "); pos != std::string::npos) {
            std::string subject = snake(clause.substr(0, pos));
            const auto* f = tables.field_by_subject(subject);
            if (!f) continue;
            std::string rest = clause.substr(pos + 2);
            if (f->multi) {
                for (const auto& part : split(rest, ','))
                    if (auto tok = snake(part); !tok.empty()) add_atom(out, f, Value::text(tok));
            } else if (auto v = value_for(*f, rest)) {
                add_atom(out, f, std::move(*v));
            }
            continue;
        }
        if (clause.size() > 8 && clause.rfind(" allowed") == clause.size() - 8) {
            std::string subject = snake(clause.substr(0, clause.size() - 8));
            SemanticAtom a;
            a.type = AtomType::Constraint;
            a.subject = subject;
            a.predicate = Predicate::Allowed;
            a.value = Value::boolean(true);
            a.modality = Modality::Should;
            out.push_back(std::move(a));
        }
    }
    return out;
}

json atoms_to_json(const std::vector<SemanticAtom>& atoms) {
    json arr = json::array();
    for (const auto& a : atoms) {
        json j;
        j["type"] = std::string(to_string(a.type));
        j["subject"] = a.subject;
        j["predicate"] = std::string(to_string(a.predicate));
        switch (a.value.kind()) {
            case ValueKind::Text: j["value"] = a.value.as_text(); break;
            case ValueKind::Boolean: j["value"] = a.value.as_boolean(); break;
            case ValueKind::Number: j["value"] = json::parse(a.value.number_lexeme()); break;
            case ValueKind::List: j["value"] = a.value.as_list(); break;
        }
        j["modality"] = std::string(to_string(a.modality));
        j["scope"] = std::string(to_string(a.scope));
        json wrapped;
        wrapped = std::move(j);
        arr.push_back(std::move(wrapped));
    }
    json root;
    root["atoms"] = std::move(arr);
    return root;
}

}  // namespace

std::vector<SemanticAtom> stub_reconstruct(const std::string& prompt, const CodecTables& tables) {
    std::string payload = prompt;
    const std::string marker = "Compressed context:\n";
    if (auto pos = prompt.rfind(marker); pos != std::string::npos)
        payload = prompt.substr(pos + marker.size());
    while (!payload.empty() && is_ascii_space(payload.back())) payload.pop_back();

    if (!payload.empty() && payload[0] == '{') {
        // canonical structured payloads are already in the answer schema
        json j = json::parse(payload, nullptr, false);
        if (!j.is_discarded() && j.contains("atoms") && j["atoms"].is_array()) {
            std::vector<SemanticAtom> out;
            for (const auto& el : j["atoms"]) {
                SemanticAtom a;
                if (!el.is_object()) continue;
                auto ty = el.contains("type") && el["type"].is_string()
                              ? parse_atom_type(el["type"].get<std::string>())
                              : std::nullopt;
                auto pr = el.contains("predicate") && el["predicate"].is_string()
                              ? parse_predicate(el["predicate"].get<std::string>())
                              : std::nullopt;
                if (!ty || !pr || !el.contains("subject") || !el["subject"].is_string()) continue;
                a.type = *ty;
                a.predicate = *pr;
                a.subject = el["subject"].get<std::string>();
                const auto& v = el["value"];
                if (v.is_string()) a.value = Value::text(v.get<std::string>());
                else if (v.is_boolean()) a.value = Value::boolean(v.get<bool>());
                else if (v.is_number()) a.value = Value::number(v.dump());
                else if (v.is_array()) {
                    std::vector<std::string> items;
                    for (const auto& it : v)
                        if (it.is_string()) items.push_back(it.get<std::string>());
                    a.value = Value::list(items);
                } else {
                    continue;
                }
                if (el.contains("modality") && el["modality"].is_string())
                    a.modality = parse_modality(el["modality"].get<std::string>()).value_or(Modality::Unknown);
                if (el.contains("scope") && el["scope"].is_string())
                    a.scope = parse_scope(el["scope"].get<std::string>()).value_or(Scope::Unknown);
                out.push_back(std::move(a));
            }
            return out;
        }
    }
    if (payload.rfind("@CCL/1", 0) == 0) {
        auto atoms = parse_symbolic(payload, Regime::CclCore, tables);
        return atoms ? *atoms : std::vector<SemanticAtom>{};
    }
    if (payload.rfind("@C1", 0) == 0) {
        auto atoms = parse_symbolic(payload, Regime::CclMin, tables);
        return atoms ? *atoms : std::vector<SemanticAtom>{};
    }
    if (auto atoms = parse_symbolic(payload, Regime::SzipAscii, tables); atoms && !atoms->empty())
        return *atoms;
    return parse_prose(payload, tables);
}

std::string stub_chat_completion(const std::string& request_body, const CodecTables& tables) {
    json req = json::parse(request_body, nullptr, false);
    std::string prompt;
    std::string model = "stub";
    if (!req.is_discarded()) {
        model = req.value("model", "stub") + "-stub";
        if (req.contains("messages") && req["messages"].is_array() && !req["messages"].empty())
            prompt = req["messages"][0].value("content", "");
    }
    auto atoms = stub_reconstruct(prompt, tables);
    json resp;
    resp["model"] = model;
    resp["choices"] = json::array(
        {json{{"index", 0}, {"message", json{{"role", "assistant"},
                                             {"content", atoms_to_json(atoms).dump()}}}}});
    return resp.dump();
}

struct StubDecoderServer::Impl {
    const CodecTables& tables;
    httplib::Server server;
    std::thread thread;
    std::atomic<int> fail_remaining{0};
    std::atomic<int> fail_status{429};

    explicit Impl(const CodecTables& t) : tables(t) {}
};

StubDecoderServer::StubDecoderServer(const CodecTables& tables) : impl_(new Impl(tables)) {
    impl_->server.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
        if (impl_->fail_remaining.load() > 0) {
            impl_->fail_remaining.fetch_sub(1);
            res.status = impl_->fail_status.load();
            res.set_content("{\"error\":\"injected failure\"}", "application/json");
            return;
        }
        res.set_content(stub_chat_completion(req.body, impl_->tables), "application/json");
    });
}

StubDecoderServer::~StubDecoderServer() { stop(); }

Result<int> StubDecoderServer::start(int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port("127.0.0.1");
        if (bound <= 0) return err("stub server could not bind a port");
    } else if (!impl_->server.bind_to_port("127.0.0.1", port)) {
        return err("stub server could not bind port " + std::to_string(port));
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void StubDecoderServer::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

void StubDecoderServer::fail_next(int n, int status) {
    impl_->fail_remaining.store(n);
    impl_->fail_status.store(status);
}

}  // namespace semzip
