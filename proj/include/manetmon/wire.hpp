#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Wire format for the monitoring protocol. One JSON object per packet,
// canonical key order, no insignificant whitespace, so that encoding the
// same message always yields the same bytes.

namespace manetmon {

enum class MessageType {
    Query,
    Aggregate,
    AggregateRoute,
    AggregateForward,
    AggregateAck,
};

const char* type_tag(MessageType t);

// Query section: what to monitor plus the sender's advertised relay set
// (parent first, then nearer ancestors; at most 3 entries).
struct QueryPayload {
    std::string function;                 // e.g. "avg(cpu)"
    std::vector<std::string> relay_set;   // <= 3 distinct addresses, never the sender

    bool operator==(const QueryPayload&) const = default;
};

// Aggregate section: a partial result travelling toward the root.
struct AggregatePayload {
    double outcome = 0.0;
    std::string destination;
    std::uint64_t observations = 0;       // >= 1

    bool operator==(const AggregatePayload&) const = default;
};

struct Message {
    MessageType type = MessageType::Query;
    std::string parent;                   // sender's parent; root uses its own address
    std::string source;
    int timeout_ms = 0;                   // > 0
    std::optional<QueryPayload> query;
    std::optional<AggregatePayload> aggregate;

    bool operator==(const Message&) const = default;
};

struct WireError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DecodeErrc {
    Ok,
    MalformedJson,
    MissingField,
    UnknownType,
    RelaySetTooLong,
    BadTimeout,
    InvalidMessage,    // structurally valid JSON that violates a message invariant
};

struct DecodeResult {
    std::optional<Message> message;
    DecodeErrc errc = DecodeErrc::Ok;
    std::string detail;

    bool ok() const { return errc == DecodeErrc::Ok; }
};

// Returns every violated invariant as a human-readable string; empty means valid.
std::vector<std::string> validate(const Message& m);

// Canonical encoding. Throws WireError (with the first violation) on an
// invalid message so broken packets can't leave a node.
std::string encode_message(const Message& m);

// Accepts any key order, ignores unknown keys, never throws on hostile input.
DecodeResult decode_message(std::string_view bytes);

}  // namespace manetmon
