#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "manetmon/simulator.hpp"
#include "manetmon/wire.hpp"

#include <string>
#include <vector>

using namespace manetmon;

namespace {

Message query_msg() {
    Message m;
    m.type = MessageType::Query;
    m.parent = "10.0.0.1";
    m.source = "10.0.0.1";
    m.timeout_ms = 500;
    m.query = QueryPayload{"avg(cpu)", {"10.0.0.2", "10.0.0.3"}};
    return m;
}

Message aggregate_msg() {
    Message m;
    m.type = MessageType::Aggregate;
    m.parent = "10.0.0.1";
    m.source = "10.0.0.5";
    m.timeout_ms = 500;
    m.aggregate = AggregatePayload{42.5, "10.0.0.1", 3};
    return m;
}

}  // namespace

TEST_CASE("canonical encoding is byte frozen") {
    CHECK(encode_message(query_msg()) ==
          R"x({"type":"query","parent":"10.0.0.1","source":"10.0.0.1","timeout":500,)x"
          R"x("query":{"function":"avg(cpu)","relaySet":["10.0.0.2","10.0.0.3"]}})x");
    CHECK(encode_message(aggregate_msg()) ==
          R"x({"type":"aggregate","parent":"10.0.0.1","source":"10.0.0.5","timeout":500,)x"
          R"x("aggregate":{"outcome":42.5,"destination":"10.0.0.1","observations":3}})x");
}

TEST_CASE("encoding has no whitespace and fixed key order") {
    std::string s = encode_message(query_msg());
    CHECK(s.find(' ') == std::string::npos);
    CHECK(s.find('\n') == std::string::npos);
    size_t t = s.find("\"type\":");
    size_t p = s.find("\"parent\":");
    size_t src = s.find("\"source\":");
    size_t to = s.find("\"timeout\":");
    size_t q = s.find("\"query\":");
    CHECK(t < p);
    CHECK(p < src);
    CHECK(src < to);
    CHECK(to < q);
    CHECK(s.find("\"function\"") < s.find("\"relaySet\""));
}

TEST_CASE("every type tag round trips") {
    const MessageType types[] = {MessageType::Query, MessageType::Aggregate,
                                 MessageType::AggregateRoute, MessageType::AggregateForward,
                                 MessageType::AggregateAck};
    const char* tags[] = {"query", "aggregate", "aggregate_route", "aggregate_forward",
                          "aggregate_ack"};
    for (int i = 0; i < 5; ++i) {
        Message m = i == 0 ? query_msg() : aggregate_msg();
        m.type = types[i];
        CHECK(type_tag(m.type) == tags[i]);
        std::string s = encode_message(m);
        DecodeResult r = decode_message(s);
        REQUIRE(r.ok());
        CHECK(*r.message == m);
    }
}

TEST_CASE("decode accepts any key order and ignores unknown keys") {
    auto r = decode_message(
        R"x({"query":{"relaySet":["10.0.0.2","10.0.0.3"],"function":"avg(cpu)"},)x"
        R"x("timeout":500,"source":"10.0.0.1","extra":[1,2],"parent":"10.0.0.1",)x"
        R"x("type":"query","hops":9})x");
    REQUIRE(r.ok());
    CHECK(*r.message == query_msg());
}

TEST_CASE("decode error kinds are distinct") {
    CHECK(decode_message("{not json").errc == DecodeErrc::MalformedJson);
    CHECK(decode_message("[1,2,3]").errc == DecodeErrc::MalformedJson);
    CHECK(decode_message(R"x({"type":"query","parent":"a","source":"b"})x").errc ==
          DecodeErrc::MissingField);
    CHECK(decode_message(
              R"x({"type":"warble","parent":"a","source":"b","timeout":500})x")
              .errc == DecodeErrc::UnknownType);
    CHECK(decode_message(
              R"x({"type":"query","parent":"a","source":"b","timeout":0,)x"
              R"x("query":{"function":"avg(cpu)","relaySet":[]}})x")
              .errc == DecodeErrc::BadTimeout);
    CHECK(decode_message(
              R"x({"type":"query","parent":"a","source":"b","timeout":500,)x"
              R"x("query":{"function":"avg(cpu)","relaySet":["c","d","e","f"]}})x")
              .errc == DecodeErrc::RelaySetTooLong);
    auto wrong_payload = decode_message(
        R"x({"type":"query","parent":"a","source":"b","timeout":500,)x"
        R"x("aggregate":{"outcome":1.0,"destination":"a","observations":1}})x");
    CHECK(wrong_payload.errc == DecodeErrc::InvalidMessage);
    CHECK_FALSE(wrong_payload.message.has_value());
    CHECK_FALSE(wrong_payload.detail.empty());
}

TEST_CASE("relay set larger than three is rejected both ways") {
    Message m = query_msg();
    m.query->relay_set = {"a", "b", "c", "d"};
    CHECK_FALSE(validate(m).empty());
    CHECK_THROWS_AS(encode_message(m), WireError);
}

TEST_CASE("validate catches structural problems") {
    Message m = query_msg();
    m.query->relay_set = {"10.0.0.2", "10.0.0.2"};
    CHECK_FALSE(validate(m).empty());    // duplicate relay

    m = query_msg();
    m.query->relay_set = {m.source};
    CHECK_FALSE(validate(m).empty());    // relay pointing back at the sender

    m = query_msg();
    m.query->function = "warble(cpu)";
    CHECK_FALSE(validate(m).empty());    // unknown aggregate kind

    m = aggregate_msg();
    m.aggregate->observations = 0;
    CHECK_FALSE(validate(m).empty());

    m = aggregate_msg();
    m.aggregate->destination.clear();
    CHECK_FALSE(validate(m).empty());

    m = aggregate_msg();
    m.query = query_msg().query;    // both payloads at once
    CHECK_FALSE(validate(m).empty());

    CHECK(validate(query_msg()).empty());
    CHECK(validate(aggregate_msg()).empty());
}

TEST_CASE("random messages round trip") {
    Rng rng(2024);
    auto addr = [&] {
        return "10.0." + std::to_string(rng.next_below(4)) + "." +
               std::to_string(1 + rng.next_below(250));
    };
    const char* kinds[] = {"avg", "sum", "count", "min", "max"};
    for (int iter = 0; iter < 500; ++iter) {
        Message m;
        m.parent = addr();
        m.source = addr();
        m.timeout_ms = 1 + static_cast<int>(rng.next_below(10000));
        if (rng.next_below(2) == 0) {
            m.type = MessageType::Query;
            QueryPayload q;
            q.function = std::string(kinds[rng.next_below(5)]) + "(metric" +
                         std::to_string(rng.next_below(10)) + ")";
            int relays = static_cast<int>(rng.next_below(4));
            for (int i = 0; i < relays; ++i) {
                std::string a = addr();
                bool dup = a == m.source;
                for (const auto& prev : q.relay_set) dup = dup || prev == a;
                if (!dup) q.relay_set.push_back(a);
            }
            m.query = std::move(q);
        } else {
            const MessageType agg_types[] = {MessageType::Aggregate,
                                             MessageType::AggregateRoute,
                                             MessageType::AggregateForward,
                                             MessageType::AggregateAck};
            m.type = agg_types[rng.next_below(4)];
            AggregatePayload a;
            a.outcome = rng.next_in(-1000.0, 1000.0);
            a.destination = addr();
            a.observations = 1 + static_cast<size_t>(rng.next_below(100));
            m.aggregate = std::move(a);
        }
        std::string bytes = encode_message(m);
        DecodeResult r = decode_message(bytes);
        REQUIRE(r.ok());
        CHECK(*r.message == m);
        CHECK(encode_message(*r.message) == bytes);
    }
}

TEST_CASE("representative packets stay in the expected size band") {
    Message q = query_msg();
    q.query->relay_set = {"10.0.0.2", "10.0.0.3", "10.0.0.4"};
    CHECK(encode_message(q).size() >= 100);
    CHECK(encode_message(q).size() <= 250);
    CHECK(encode_message(aggregate_msg()).size() >= 100);
    CHECK(encode_message(aggregate_msg()).size() <= 250);
}
