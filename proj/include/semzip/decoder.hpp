#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "semzip/case_io.hpp"
#include "semzip/codec.hpp"
#include "semzip/normalize.hpp"

namespace semzip {

// Checked resource: the template file must hash to this value or the run
// refuses to start (the template's hash is part of the run manifest).
inline constexpr std::string_view kPromptTemplateSha256 =
    "c18e5264cbc7bfd3b00696b25f25805545e044a0f1dd0cc0d4e9748b8da36d37";
inline constexpr std::string_view kPromptPlaceholder = "<COMPRESSED_REPRESENTATION>";

struct RetryPolicy {
    int max_attempts = 3;
    int backoff_ms = 250;  // doubled per attempt
};

struct DecoderConfig {
    std::string model = "gpt-4o-mini";
    std::string endpoint = "stub";  // "stub" or http(s)://host[:port][/prefix]
    double temperature = 0.0;       // pinned unless unsafe_sampling
    double top_p = 1.0;             // pinned unless unsafe_sampling
    bool unsafe_sampling = false;
    int max_output_tokens = 2048;
    int timeout_ms = 60000;
    RetryPolicy retry;
    std::string api_key_env = "SEMZIP_API_KEY";
    int parallelism = 4;
    bool strict_json = false;
};

struct DecodeRecord {
    std::string case_id;
    std::string regime;
    std::string prompt;
    std::string raw_response;  // byte-exact, archived before parsing
    std::vector<SemanticAtom> atoms;
    int dropped_atoms = 0;
    std::string failure;  // nonempty iff the record failed (atoms empty then)
    bool failed = false;
    std::int64_t request_ms = 0;   // epoch milliseconds
    std::int64_t response_ms = 0;
    std::string model_echoed;
    int attempts = 0;
};

// The Appendix-style template with the placeholder replaced by the
// payload verbatim; no other substitution, no escaping.
Result<std::string> render_prompt(const std::string& template_text, const std::string& payload);
Result<std::string> load_prompt_template(const std::string& path);

struct PromptRecord {
    std::string case_id;
    std::string regime;
    std::string prompt;
};

// One JSONL record per (case, regime): deterministic order (case-set
// order, then fixed regime order). First line is a header record.
Result<std::string> export_prompts(const std::vector<CaseRecord>& cases,
                                   const std::vector<Regime>& regimes,
                                   const std::string& template_text);
Result<std::vector<PromptRecord>> parse_prompt_batch(const std::string& jsonl);

// Transport abstraction: one chat completion round trip.
struct ChatReply {
    int status = 0;
    std::string body;
};
using ChatTransport = std::function<Result<ChatReply>(const std::string& request_body)>;

// POSTs to <endpoint>/v1/chat/completions with bearer auth from
// api_key_env. endpoint "stub" runs the offline stub decoder in-process.
Result<ChatTransport> make_transport(const DecoderConfig& config, const CodecTables& tables);

// Bounded-parallel fan-out; raw responses archived via on_record as soon
// as each record settles. Transient failures (429/5xx/transport) retry
// per policy; auth failures abort; other failures are recorded and the
// run continues.
Result<std::vector<DecodeRecord>> decode_batch(const std::vector<PromptRecord>& batch,
                                               const DecoderConfig& config,
                                               const ChatTransport& transport,
                                               const std::function<void(const DecodeRecord&)>& on_record = {});

struct ParsedDecoderOutput {
    std::vector<SemanticAtom> atoms;
    int dropped = 0;  // atoms rejected by schema validation
};

// Tolerant extraction: strips code fences and surrounding prose, finds
// the outermost JSON object with an "atoms" array, validates each atom
// against the decoder schema. Unknown modality/scope values map to
// unknown; unknown type/predicate values fail that atom. strict mode
// requires the entire output to be the JSON object.
Result<ParsedDecoderOutput> parse_decoder_output(const std::string& raw, bool strict = false,
                                                 const AliasTable& table = default_alias_table());

}  // namespace semzip
