/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_NETWORK_H
#define MCASTSIM_NETWORK_H

#include "mcastsim/black-hole.h"
#include "mcastsim/metrics.h"
#include "mcastsim/mobility.h"
#include "mcastsim/odmrp.h"
#include "mcastsim/radio.h"
#include "mcastsim/simulator.h"

#include <memory>
#include <vector>

namespace mcast
{

/// Everything needed to assemble one run over an explicit topology.
struct NetworkSetup
{
    std::vector<Position> positions;
    MobilityConfig mobility;
    RadioConfig radio;
    ProtocolConfig protocol;
    TrafficConfig traffic;
    AttackConfig attack;
    std::vector<NodeId> sources;
    std::vector<NodeId> receivers;
    std::vector<NodeId> attackers;
    GroupId group{1};
    uint64_t seed{1};
};

/**
 * One simulation run: engine, mobility, channel, protocol and metrics wired
 * together. Start() assigns roles and starts every source at the current
 * clock; the caller then advances time and finally collects the result.
 */
class Network
{
  public:
    explicit Network(NetworkSetup setup, TraceSink* trace = nullptr);

    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;

    void Start();
    uint64_t RunUntil(SimTime end);
    RunResult Finish(const ScenarioEcho& echo = {});

    Simulator& Sim()
    {
        return m_sim;
    }

    RandomWaypointMobility& Mobility()
    {
        return m_mobility;
    }

    Radio& Channel()
    {
        return m_radio;
    }

    OdmrpProtocol& Protocol()
    {
        return m_protocol;
    }

    MetricsAccumulator& Metrics()
    {
        return m_metrics;
    }

    const NetworkSetup& Setup() const
    {
        return m_setup;
    }

  private:
    NetworkSetup m_setup;
    Simulator m_sim;
    RandomWaypointMobility m_mobility;
    Radio m_radio;
    MetricsAccumulator m_metrics;
    OdmrpProtocol m_protocol;
    bool m_started{false};
};

} // namespace mcast

#endif // MCASTSIM_NETWORK_H
