/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/simulator.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace mcast
{

namespace
{

// FNV-1a style word mix
uint64_t
Fnv1a(uint64_t h, uint64_t v)
{
    h ^= v;
    h *= 0x100000001b3ULL;
    return h ^ (h >> 29);
}

} // namespace

std::string_view
ToString(EventKind kind)
{
    switch (kind)
    {
    case EventKind::PacketDelivery:
        return "PacketDelivery";
    case EventKind::PeriodicJreq:
        return "PeriodicJreq";
    case EventKind::DataGeneration:
        return "DataGeneration";
    case EventKind::FgExpiryCheck:
        return "FgExpiryCheck";
    case EventKind::SimEnd:
        return "SimEnd";
    }
    return "Unknown";
}

std::string_view
ToString(PacketKind kind)
{
    switch (kind)
    {
    case PacketKind::JoinRequest:
        return "jreq";
    case PacketKind::JoinReply:
        return "jrep";
    case PacketKind::Data:
        return "data";
    }
    return "unknown";
}

Simulator::Simulator(uint64_t seed)
    : m_seed(seed)
{
}

EventId
Simulator::Schedule(SimTime at, EventKind kind, NodeId node, EventPayload payload)
{
    if (!std::isfinite(at.GetSeconds()) || at < m_now)
    {
        std::ostringstream os;
        os << "cannot schedule " << ToString(kind) << " for node " << node << " at t="
           << at.GetSeconds() << " (clock is " << m_now.GetSeconds() << ")";
        throw SimulationFault(os.str());
    }
    const EventId id = m_nextSeq++;
    uint32_t slot;
    if (m_freeSlots.empty())
    {
        slot = static_cast<uint32_t>(m_slots.size());
        m_slots.push_back(Event{at, id, kind, node, std::move(payload)});
    }
    else
    {
        slot = m_freeSlots.back();
        m_freeSlots.pop_back();
        m_slots[slot] = Event{at, id, kind, node, std::move(payload)};
    }
    m_heap.push_back(QueueEntry{at, id, slot});
    std::push_heap(m_heap.begin(), m_heap.end(), Later{});
    return id;
}

uint64_t
Simulator::RunUntil(SimTime end)
{
    if (end < m_now)
    {
        throw SimulationFault("RunUntil end precedes the current clock");
    }
    uint64_t count = 0;
    while (!m_heap.empty() && m_heap.front().fireAt <= end)
    {
        std::pop_heap(m_heap.begin(), m_heap.end(), Later{});
        const uint32_t slot = m_heap.back().slot;
        m_heap.pop_back();
        Event ev = std::move(m_slots[slot]);
        m_slots[slot].payload.packet.reset();
        m_freeSlots.push_back(slot);

        m_now = ev.fireAt;
        m_currentSeq = ev.seq;
        ++m_processed;
        ++count;

        uint64_t h = m_traceHash;
        h = Fnv1a(h, std::bit_cast<uint64_t>(ev.fireAt.GetSeconds()));
        h = Fnv1a(h, ev.seq);
        h = Fnv1a(h, static_cast<uint64_t>(ev.kind));
        h = Fnv1a(h, ev.node);
        h = Fnv1a(h, ev.payload.from);
        m_traceHash = h;

        if (m_trace)
        {
            nlohmann::json detail = nlohmann::json::object();
            if (ev.payload.packet)
            {
                detail["packet"] = ToString(ev.payload.packet->GetKind());
                detail["from"] = ev.payload.from;
            }
            m_trace->Write(TraceRecord{m_now, ev.seq, std::string(ToString(ev.kind)), ev.node,
                                       std::move(detail)});
        }
        if (m_handler)
        {
            m_handler(ev);
        }
    }
    m_now = end;
    return count;
}

void
Simulator::Trace(std::string kind, NodeId node, nlohmann::json detail)
{
    if (!m_trace)
    {
        return;
    }
    m_trace->Write(TraceRecord{m_now, m_currentSeq, std::move(kind), node, std::move(detail)});
}

} // namespace mcast
