#include "manetmon/wire.hpp"

#include <json.hpp>

#include "manetmon/aggregation.hpp"

namespace manetmon {

using ordered_json = nlohmann::ordered_json;

const char* type_tag(MessageType t) {
    switch (t) {
        case MessageType::Query:            return "query";
        case MessageType::Aggregate:        return "aggregate";
        case MessageType::AggregateRoute:   return "aggregate_route";
        case MessageType::AggregateForward: return "aggregate_forward";
        case MessageType::AggregateAck:     return "aggregate_ack";
    }
    return "?";
}

static std::optional<MessageType> type_from_tag(const std::string& s) {
    if (s == "query")             return MessageType::Query;
    if (s == "aggregate")         return MessageType::Aggregate;
    if (s == "aggregate_route")   return MessageType::AggregateRoute;
    if (s == "aggregate_forward") return MessageType::AggregateForward;
    if (s == "aggregate_ack")     return MessageType::AggregateAck;
    return std::nullopt;
}

std::vector<std::string> validate(const Message& m) {
    std::vector<std::string> bad;
    if (m.parent.empty()) bad.push_back("parent is empty");
    if (m.source.empty()) bad.push_back("source is empty");
    if (m.timeout_ms <= 0) bad.push_back("timeout must be positive");

    const bool wants_query = m.type == MessageType::Query;
    if (wants_query != m.query.has_value())
        bad.push_back(wants_query ? "query payload missing" : "unexpected query payload");
    if (wants_query == m.aggregate.has_value())
        bad.push_back(wants_query ? "unexpected aggregate payload" : "aggregate payload missing");

    if (m.query) {
        if (m.query->function.empty()) bad.push_back("query.function is empty");
        else if (!parse_function(m.query->function))
            bad.push_back("query.function is not a monitor function: " + m.query->function);
        if (m.query->relay_set.size() > 3) bad.push_back("relaySet longer than 3");
        for (size_t i = 0; i < m.query->relay_set.size(); ++i) {
            const auto& r = m.query->relay_set[i];
            if (r.empty()) bad.push_back("relaySet entry is empty");
            if (r == m.source) bad.push_back("relaySet contains the source");
            for (size_t j = i + 1; j < m.query->relay_set.size(); ++j)
                if (r == m.query->relay_set[j]) bad.push_back("relaySet entry duplicated: " + r);
        }
    }
    if (m.aggregate) {
        if (m.aggregate->destination.empty()) bad.push_back("aggregate.destination is empty");
        if (m.aggregate->observations < 1) bad.push_back("aggregate.observations must be >= 1");
    }
    return bad;
}

std::string encode_message(const Message& m) {
    auto bad = validate(m);
    if (!bad.empty()) throw WireError("refusing to encode: " + bad.front());

    ordered_json j;
    j["type"] = type_tag(m.type);
    j["parent"] = m.parent;
    j["source"] = m.source;
    j["timeout"] = m.timeout_ms;
    if (m.query) {
        ordered_json q;
        q["function"] = m.query->function;
        q["relaySet"] = m.query->relay_set;
        j["query"] = std::move(q);
    }
    if (m.aggregate) {
        ordered_json a;
        a["outcome"] = m.aggregate->outcome;
        a["destination"] = m.aggregate->destination;
        a["observations"] = m.aggregate->observations;
        j["aggregate"] = std::move(a);
    }
    return j.dump();
}

DecodeResult decode_message(std::string_view bytes) {
    DecodeResult r;
    auto fail = [&](DecodeErrc e, std::string why) {
        r.errc = e;
        r.detail = std::move(why);
        r.message.reset();
        return r;
    };

    ordered_json j = ordered_json::parse(bytes, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        return fail(DecodeErrc::MalformedJson, "not a JSON object");

    Message m;

    auto need = [&](const char* key) -> const ordered_json* {
        auto it = j.find(key);
        return it == j.end() ? nullptr : &*it;
    };

    const ordered_json* type = need("type");
    if (!type) return fail(DecodeErrc::MissingField, "missing field: type");
    if (!type->is_string()) return fail(DecodeErrc::MalformedJson, "type is not a string");
    auto t = type_from_tag(type->get<std::string>());
    if (!t) return fail(DecodeErrc::UnknownType, "unknown type tag: " + type->get<std::string>());
    m.type = *t;

    for (const char* key : {"parent", "source"}) {
        const ordered_json* v = need(key);
        if (!v) return fail(DecodeErrc::MissingField, std::string("missing field: ") + key);
        if (!v->is_string()) return fail(DecodeErrc::MalformedJson, std::string(key) + " is not a string");
        (key[0] == 'p' ? m.parent : m.source) = v->get<std::string>();
    }

    const ordered_json* timeout = need("timeout");
    if (!timeout) return fail(DecodeErrc::MissingField, "missing field: timeout");
    if (!timeout->is_number_integer())
        return fail(DecodeErrc::MalformedJson, "timeout is not an integer");
    m.timeout_ms = timeout->get<int>();
    if (m.timeout_ms <= 0) return fail(DecodeErrc::BadTimeout, "timeout must be positive");

    if (const ordered_json* q = need("query")) {
        if (!q->is_object()) return fail(DecodeErrc::MalformedJson, "query is not an object");
        QueryPayload qp;
        auto f = q->find("function");
        if (f == q->end()) return fail(DecodeErrc::MissingField, "missing field: query.function");
        if (!f->is_string()) return fail(DecodeErrc::MalformedJson, "query.function is not a string");
        qp.function = f->get<std::string>();
        auto rs = q->find("relaySet");
        if (rs == q->end()) return fail(DecodeErrc::MissingField, "missing field: query.relaySet");
        if (!rs->is_array()) return fail(DecodeErrc::MalformedJson, "query.relaySet is not an array");
        if (rs->size() > 3) return fail(DecodeErrc::RelaySetTooLong, "relaySet longer than 3");
        for (const auto& e : *rs) {
            if (!e.is_string()) return fail(DecodeErrc::MalformedJson, "relaySet entry is not a string");
            qp.relay_set.push_back(e.get<std::string>());
        }
        m.query = std::move(qp);
    }

    if (const ordered_json* a = need("aggregate")) {
        if (!a->is_object()) return fail(DecodeErrc::MalformedJson, "aggregate is not an object");
        AggregatePayload ap;
        auto o = a->find("outcome");
        if (o == a->end()) return fail(DecodeErrc::MissingField, "missing field: aggregate.outcome");
        if (!o->is_number()) return fail(DecodeErrc::MalformedJson, "aggregate.outcome is not a number");
        ap.outcome = o->get<double>();
        auto d = a->find("destination");
        if (d == a->end()) return fail(DecodeErrc::MissingField, "missing field: aggregate.destination");
        if (!d->is_string()) return fail(DecodeErrc::MalformedJson, "aggregate.destination is not a string");
        ap.destination = d->get<std::string>();
        auto n = a->find("observations");
        if (n == a->end()) return fail(DecodeErrc::MissingField, "missing field: aggregate.observations");
        if (!n->is_number_unsigned() && !(n->is_number_integer() && n->get<std::int64_t>() >= 0))
            return fail(DecodeErrc::MalformedJson, "aggregate.observations is not a non-negative integer");
        ap.observations = n->get<std::uint64_t>();
        m.aggregate = std::move(ap);
    }

    auto bad = validate(m);
    if (!bad.empty()) return fail(DecodeErrc::InvalidMessage, bad.front());

    r.message = std::move(m);
    return r;
}

}  // namespace manetmon
