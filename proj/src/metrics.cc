/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/metrics.h"

#include "mcastsim/simulator.h"

#include <sstream>

namespace mcast
{

void
MetricsAccumulator::Mutable() const
{
    if (m_frozen)
    {
        throw SimulationFault("metrics accumulator is frozen");
    }
}

void
MetricsAccumulator::RecordGeneration(NodeId source, GroupId /*group*/, uint32_t seq, SimTime /*t*/,
                                     uint32_t receiverCount)
{
    Mutable();
    if (!m_generatedKeys.insert(PacketKey(source, seq)).second)
    {
        std::ostringstream os;
        os << "packet (" << source << ", " << seq << ") generated twice";
        throw SimulationFault(os.str());
    }
    ++m_generated;
    m_expected += receiverCount;
}

bool
MetricsAccumulator::RecordDelivery(NodeId receiver, NodeId source, uint32_t seq, SimTime createdAt,
                                   SimTime t)
{
    Mutable();
    if (t < createdAt)
    {
        std::ostringstream os;
        os << "packet (" << source << ", " << seq << ") delivered to " << receiver << " at "
           << t.GetSeconds() << " before its creation at " << createdAt.GetSeconds();
        throw SimulationFault(os.str());
    }
    const uint64_t key = PacketKey(source, seq);
    if (!m_generatedKeys.contains(key))
    {
        std::ostringstream os;
        os << "delivery of packet (" << source << ", " << seq << ") that was never generated";
        throw SimulationFault(os.str());
    }
    if (!m_perReceiver[receiver].insert(key).second)
    {
        return false;
    }
    ++m_delivered;
    m_delaySum += (t - createdAt).GetSeconds();
    return true;
}

uint64_t
MetricsAccumulator::DeliveredTo(NodeId receiver) const
{
    auto it = m_perReceiver.find(receiver);
    return it == m_perReceiver.end() ? 0 : it->second.size();
}

RunResult
MetricsAccumulator::Finalize(const ScenarioEcho& echo)
{
    m_frozen = true;
    RunResult r;
    r.generated = m_generated;
    r.expectedDeliveries = m_expected;
    r.delivered = m_delivered;
    r.droppedByAttackers = m_droppedByAttackers;
    r.controlOverhead = m_controlPackets;
    r.echo = echo;
    if (m_expected == 0)
    {
        r.pdr = 0.0;
        r.pdrUndefined = true;
    }
    else
    {
        r.pdr = static_cast<double>(m_delivered) / static_cast<double>(m_expected);
    }
    if (m_delivered > 0)
    {
        r.avgDelayMs = m_delaySum * 1000.0 / static_cast<double>(m_delivered);
    }
    return r;
}

} // namespace mcast
