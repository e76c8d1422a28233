/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_TRACE_H
#define MCASTSIM_TRACE_H

#include "mcastsim/packet.h"
#include "mcastsim/sim-time.h"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mcast
{

/// One line of the event trace: {t, seq, kind, node, detail}.
struct TraceRecord
{
    SimTime t;
    uint64_t seq{0};
    std::string kind;
    NodeId node{0};
    nlohmann::json detail;

    nlohmann::json ToJson() const;
    static TraceRecord FromJson(const nlohmann::json& j);
};

class TraceSink
{
  public:
    virtual ~TraceSink() = default;
    virtual void Write(TraceRecord record) = 0;
};

/// Newline-delimited JSON, one record per line.
class JsonLinesTraceSink : public TraceSink
{
  public:
    explicit JsonLinesTraceSink(std::ostream& os)
        : m_os(os)
    {
    }

    void Write(TraceRecord record) override;

  private:
    std::ostream& m_os;
};

class MemoryTraceSink : public TraceSink
{
  public:
    void Write(TraceRecord record) override
    {
        m_records.push_back(std::move(record));
    }

    const std::vector<TraceRecord>& Records() const
    {
        return m_records;
    }

    std::vector<TraceRecord> OfKind(const std::string& kind) const;

  private:
    std::vector<TraceRecord> m_records;
};

/// [{source, seq, next_hop}, ...]
nlohmann::json EntriesJson(const std::vector<JoinReplyEntry>& entries);

} // namespace mcast

#endif // MCASTSIM_TRACE_H
