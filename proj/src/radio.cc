/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/radio.h"

#include <cmath>
#include <stdexcept>

namespace mcast
{

namespace
{

nlohmann::json
Describe(const Packet& packet)
{
    nlohmann::json j = {{"packet", ToString(packet.GetKind())}};
    if (const auto* jreq = std::get_if<JoinRequest>(&packet.body))
    {
        j["source"] = jreq->source;
        j["seq"] = jreq->seq;
    }
    else if (const auto* data = std::get_if<DataPacket>(&packet.body))
    {
        j["source"] = data->source;
        j["seq"] = data->seq;
    }
    else
    {
        j["entries"] = EntriesJson(std::get<JoinReply>(packet.body).entries);
    }
    return j;
}

} // namespace

void
RadioConfig::Validate() const
{
    if (!(range > 0.0) || !std::isfinite(range))
    {
        throw std::invalid_argument("range must be > 0");
    }
    if (!(perHopLatency > 0.0) || !std::isfinite(perHopLatency))
    {
        throw std::invalid_argument("per-hop latency must be > 0");
    }
    if (!(jitter >= 0.0) || !std::isfinite(jitter))
    {
        throw std::invalid_argument("jitter must be >= 0");
    }
    if (!(lossProb >= 0.0 && lossProb <= 1.0))
    {
        throw std::invalid_argument("loss probability must lie in [0, 1]");
    }
}

Radio::Radio(const RadioConfig& config, RandomWaypointMobility& mobility, Simulator& sim)
    : m_config(config),
      m_mobility(mobility),
      m_sim(sim),
      m_rng(sim.Stream(RandomStream::RadioChannel))
{
    m_config.Validate();
}

std::vector<NodeId>
Radio::Neighbors(NodeId node, SimTime t)
{
    std::vector<NodeId> out;
    CollectNeighbors(node, t, out);
    return out;
}

Position
Radio::Locate(NodeId node, SimTime t)
{
    Fix& fix = m_fixes[node];
    fix.pos = m_mobility.PositionAt(node, t);
    fix.at = t;
    return fix.pos;
}

void
Radio::CollectNeighbors(NodeId node, SimTime t, std::vector<NodeId>& out)
{
    out.clear();
    const auto n = static_cast<NodeId>(m_mobility.NodeCount());
    if (m_fixes.size() != n)
    {
        m_fixes.assign(n, Fix{});
    }
    const Position self = Locate(node, t);
    const double range = m_config.range;
    const double vMax = m_mobility.Config().vMax;
    for (NodeId other = 0; other < n; ++other)
    {
        if (other == node)
        {
            continue;
        }
        // A node moves at most vMax * |t - fix.at| from its last fix, so the
        // fix settles the test unless the true distance may straddle the range.
        const Fix& fix = m_fixes[other];
        const double elapsed = std::abs((t - fix.at).GetSeconds());
        if (std::isfinite(elapsed))
        {
            const double slack = vMax * elapsed + 1e-6;
            const double dx = fix.pos.x - self.x;
            const double dy = fix.pos.y - self.y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d - slack > range)
            {
                continue;
            }
            if (d + slack < range)
            {
                out.push_back(other);
                continue;
            }
        }
        const Position p = Locate(other, t);
        const double dx = p.x - self.x;
        const double dy = p.y - self.y;
        if (dx * dx + dy * dy <= range * range)
        {
            out.push_back(other);
        }
    }
}

std::size_t
Radio::Broadcast(NodeId sender, std::shared_ptr<const Packet> packet, SimTime processingDelay)
{
    ++m_transmissions;
    const SimTime now = m_sim.Now();
    CollectNeighbors(sender, now, m_neighbors);
    const bool tracing = m_sim.Tracing();
    std::size_t scheduled = 0;
    nlohmann::json recipients;
    for (NodeId to : m_neighbors)
    {
        if (m_config.lossProb > 0.0 && m_rng.Bernoulli(m_config.lossProb))
        {
            continue;
        }
        double delay = processingDelay.GetSeconds() + m_config.perHopLatency;
        if (m_config.jitter > 0.0)
        {
            delay += m_rng.Uniform(0.0, m_config.jitter);
        }
        m_sim.Schedule(now + Seconds(delay), EventKind::PacketDelivery, to,
                       EventPayload{sender, 0, 0, packet});
        ++scheduled;
        if (tracing)
        {
            recipients.push_back(to);
        }
    }
    if (tracing)
    {
        if (recipients.is_null())
        {
            recipients = nlohmann::json::array();
        }
        nlohmann::json detail = Describe(*packet);
        detail["neighbors"] = m_neighbors;
        detail["recipients"] = std::move(recipients);
        m_sim.Trace("tx", sender, std::move(detail));
    }
    return scheduled;
}

} // namespace mcast
