/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_METRICS_H
#define MCASTSIM_METRICS_H

#include "mcastsim/sim-time.h"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>

namespace mcast
{

/// Scenario parameters echoed into every result row.
struct ScenarioEcho
{
    uint64_t seed{0};
    uint32_t nodeCount{0};
    uint32_t senders{0};
    uint32_t receivers{0};
    uint32_t attackers{0};
    std::string attackMode;
    double maxSpeed{0.0};
    double duration{0.0};
};

struct RunResult
{
    /// delivered / expectedDeliveries; 0 when nothing was expected (see pdrUndefined).
    double pdr{0.0};
    bool pdrUndefined{false};
    /// Mean over delivered (receiver, packet) pairs; empty when nothing was delivered.
    std::optional<double> avgDelayMs;
    uint64_t generated{0};
    uint64_t expectedDeliveries{0};
    uint64_t delivered{0};
    uint64_t droppedByAttackers{0};
    uint64_t controlOverhead{0};
    ScenarioEcho echo;
};

/**
 * Per-run delivery bookkeeping.
 *
 * The delivery ratio is counted per (receiver, packet) pair: each generated
 * packet adds the group's receiver count at generation time to the
 * denominator. Delay is averaged over first deliveries only.
 */
class MetricsAccumulator
{
  public:
    /// Throws SimulationFault on a repeated (source, seq).
    void RecordGeneration(NodeId source, GroupId group, uint32_t seq, SimTime t,
                          uint32_t receiverCount);

    /**
     * First delivery of (receiver, source, seq) counts; repeats are ignored.
     * Throws SimulationFault if t < createdAt or the packet was never generated.
     * Returns true when the delivery was counted.
     */
    bool RecordDelivery(NodeId receiver, NodeId source, uint32_t seq, SimTime createdAt, SimTime t);

    void RecordAttackerDrop()
    {
        Mutable();
        ++m_droppedByAttackers;
    }

    void RecordControlPacket()
    {
        Mutable();
        ++m_controlPackets;
    }

    RunResult Finalize(const ScenarioEcho& echo = {});

    uint64_t Generated() const
    {
        return m_generated;
    }

    uint64_t ExpectedDeliveries() const
    {
        return m_expected;
    }

    uint64_t Delivered() const
    {
        return m_delivered;
    }

    double DelaySumSeconds() const
    {
        return m_delaySum;
    }

    uint64_t DroppedByAttackers() const
    {
        return m_droppedByAttackers;
    }

    uint64_t ControlPackets() const
    {
        return m_controlPackets;
    }

    uint64_t DeliveredTo(NodeId receiver) const;

    bool Frozen() const
    {
        return m_frozen;
    }

  private:
    void Mutable() const;

    static uint64_t PacketKey(NodeId source, uint32_t seq)
    {
        return (static_cast<uint64_t>(source) << 32) | seq;
    }

    uint64_t m_generated{0};
    uint64_t m_expected{0};
    uint64_t m_delivered{0};
    double m_delaySum{0.0};
    uint64_t m_droppedByAttackers{0};
    uint64_t m_controlPackets{0};
    bool m_frozen{false};
    std::unordered_set<uint64_t> m_generatedKeys;
    // receiver -> delivered packet keys
    std::map<NodeId, std::unordered_set<uint64_t>> m_perReceiver;
};

} // namespace mcast

#endif // MCASTSIM_METRICS_H
