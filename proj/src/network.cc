/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/network.h"

#include <stdexcept>

namespace mcast
{

Network::Network(NetworkSetup setup, TraceSink* trace)
    : m_setup(std::move(setup)),
      m_sim(m_setup.seed),
      m_mobility(m_setup.mobility, m_setup.positions, m_setup.seed),
      m_radio(m_setup.radio, m_mobility, m_sim),
      m_protocol(m_setup.protocol, m_sim, m_radio, m_metrics, m_setup.positions.size())
{
    m_sim.SetTraceSink(trace);
    m_sim.SetHandler([this](const Event& ev) { m_protocol.HandleEvent(ev); });
    m_protocol.SetTraffic(m_setup.traffic);
}

void
Network::Start()
{
    if (m_started)
    {
        throw std::logic_error("network already started");
    }
    m_started = true;
    for (NodeId a : m_setup.attackers)
    {
        m_protocol.MakeAttacker(a, m_setup.attack);
    }
    for (NodeId r : m_setup.receivers)
    {
        m_protocol.JoinReceiver(r, m_setup.group);
    }
    for (NodeId s : m_setup.sources)
    {
        m_protocol.StartSource(s, m_setup.group);
    }
}

uint64_t
Network::RunUntil(SimTime end)
{
    return m_sim.RunUntil(end);
}

RunResult
Network::Finish(const ScenarioEcho& echo)
{
    return m_metrics.Finalize(echo);
}

} // namespace mcast
