/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/trace.h"

namespace mcast
{

nlohmann::json
TraceRecord::ToJson() const
{
    return nlohmann::json{{"t", t.GetSeconds()},
                          {"seq", seq},
                          {"kind", kind},
                          {"node", node},
                          {"detail", detail}};
}

TraceRecord
TraceRecord::FromJson(const nlohmann::json& j)
{
    TraceRecord r;
    r.t = Seconds(j.at("t").get<double>());
    r.seq = j.at("seq").get<uint64_t>();
    r.kind = j.at("kind").get<std::string>();
    r.node = j.at("node").get<NodeId>();
    r.detail = j.value("detail", nlohmann::json::object());
    return r;
}

void
JsonLinesTraceSink::Write(TraceRecord record)
{
    m_os << record.ToJson().dump() << '\n';
}

std::vector<TraceRecord>
MemoryTraceSink::OfKind(const std::string& kind) const
{
    std::vector<TraceRecord> out;
    for (const auto& r : m_records)
    {
        if (r.kind == kind)
        {
            out.push_back(r);
        }
    }
    return out;
}

nlohmann::json
EntriesJson(const std::vector<JoinReplyEntry>& entries)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : entries)
    {
        out.push_back({{"source", e.source}, {"seq", e.seq}, {"next_hop", e.nextHop}});
    }
    return out;
}

} // namespace mcast
