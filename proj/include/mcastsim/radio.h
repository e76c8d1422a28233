/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_RADIO_H
#define MCASTSIM_RADIO_H

#include "mcastsim/mobility.h"
#include "mcastsim/packet.h"
#include "mcastsim/random-source.h"
#include "mcastsim/simulator.h"

#include <memory>
#include <vector>

namespace mcast
{

struct RadioConfig
{
    /// Unit-disk range in meters; a node at exactly `range` is a neighbor.
    double range{250.0};
    /// Transmission plus processing time per hop, seconds.
    double perHopLatency{0.002};
    /// Upper bound of the uniform additive jitter, seconds.
    double jitter{0.001};
    double lossProb{0.0};

    void Validate() const;
    bool operator==(const RadioConfig&) const = default;
};

/**
 * Idealized broadcast channel. Connectivity is evaluated once, at transmit
 * time, against the mobility model; every neighbor gets an independent
 * PacketDelivery event after the per-hop latency plus a jitter draw, unless
 * the loss draw discards it. There is no contention or collision model.
 */
class Radio
{
  public:
    Radio(const RadioConfig& config, RandomWaypointMobility& mobility, Simulator& sim);

    /// Nodes other than `node` within range at time t, ascending by id.
    std::vector<NodeId> Neighbors(NodeId node, SimTime t);

    /**
     * Broadcasts at the current clock. `processingDelay` is added before the
     * per-hop latency (reply-building time at the sender).
     * Returns the number of deliveries scheduled.
     */
    std::size_t Broadcast(NodeId sender, std::shared_ptr<const Packet> packet,
                          SimTime processingDelay = SimTime());

    const RadioConfig& Config() const
    {
        return m_config;
    }

    uint64_t Transmissions() const
    {
        return m_transmissions;
    }

  private:
    // last exact position computed for a node
    struct Fix
    {
        SimTime at{SimTime::NegativeInfinite()};
        Position pos;
    };

    void CollectNeighbors(NodeId node, SimTime t, std::vector<NodeId>& out);
    Position Locate(NodeId node, SimTime t);

    RadioConfig m_config;
    RandomWaypointMobility& m_mobility;
    Simulator& m_sim;
    RandomSource m_rng;
    uint64_t m_transmissions{0};
    std::vector<NodeId> m_neighbors;
    std::vector<Fix> m_fixes;
};

} // namespace mcast

#endif // MCASTSIM_RADIO_H
