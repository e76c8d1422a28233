/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/black-hole.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mcast
{

std::string_view
ToString(DropMode mode)
{
    switch (mode)
    {
    case DropMode::Bulk:
        return "bulk";
    case DropMode::EveryN:
        return "every_n";
    case DropMode::EveryT:
        return "every_t";
    case DropMode::RandomP:
        return "random_p";
    case DropMode::PerDestination:
        return "per_destination";
    }
    return "unknown";
}

std::optional<DropMode>
ParseDropMode(std::string_view text)
{
    for (auto mode : {DropMode::Bulk, DropMode::EveryN, DropMode::EveryT, DropMode::RandomP,
                      DropMode::PerDestination})
    {
        if (text == ToString(mode))
        {
            return mode;
        }
    }
    return std::nullopt;
}

std::string
DropTarget::ToString() const
{
    return (kind == Kind::Group ? "group:" : "source:") + std::to_string(id);
}

std::optional<DropTarget>
DropTarget::Parse(std::string_view text)
{
    DropTarget target;
    if (text.starts_with("group:"))
    {
        text.remove_prefix(6);
    }
    else if (text.starts_with("source:"))
    {
        target.kind = Kind::Source;
        text.remove_prefix(7);
    }
    uint32_t id = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    {
        return std::nullopt;
    }
    target.id = id;
    return target;
}

void
AttackConfig::Validate() const
{
    if (everyN < 1)
    {
        throw std::invalid_argument("every_n period must be >= 1");
    }
    if (!(everyT > 0.0) || !std::isfinite(everyT))
    {
        throw std::invalid_argument("every_t window must be > 0");
    }
    if (!(probability >= 0.0 && probability <= 1.0))
    {
        throw std::invalid_argument("drop probability must lie in [0, 1]");
    }
}

BlackHole::BlackHole(NodeId self, const AttackConfig& config, RandomSource rng)
    : m_self(self),
      m_config(config),
      m_rng(std::move(rng))
{
    m_config.Validate();
}

std::optional<JoinReply>
BlackHole::OnJoinRequest(const JoinRequest& jreq, SimTime /*t*/)
{
    if (!m_config.forgeReplies)
    {
        return std::nullopt;
    }
    ++m_state.repliesForged;
    JoinReply forged;
    forged.group = jreq.group;
    forged.origin = m_self;
    forged.entries.push_back(JoinReplyEntry{jreq.source, jreq.seq, jreq.prevHop});
    return forged;
}

bool
BlackHole::ShouldDrop(const DataPacket& pkt, SimTime t)
{
    ++m_state.packetsSeen;
    bool drop = false;
    switch (m_config.mode)
    {
    case DropMode::Bulk:
        drop = true;
        break;
    case DropMode::EveryN:
        drop = m_state.packetsSeen % m_config.everyN == 0;
        break;
    case DropMode::EveryT:
        if ((t - m_state.lastDropAt).GetSeconds() >= m_config.everyT)
        {
            drop = true;
            m_state.lastDropAt = t;
        }
        break;
    case DropMode::RandomP:
        drop = m_rng.Bernoulli(m_config.probability);
        break;
    case DropMode::PerDestination:
        drop = m_config.target.kind == DropTarget::Kind::Group ? pkt.group == m_config.target.id
                                                               : pkt.source == m_config.target.id;
        break;
    }
    if (drop)
    {
        ++m_state.packetsDropped;
    }
    return drop;
}

std::vector<NodeId>
SelectAttackers(uint32_t nodeCount, std::span<const NodeId> excluded, uint32_t count,
                RandomSource& rng)
{
    std::vector<NodeId> pool;
    for (NodeId id = 0; id < nodeCount; ++id)
    {
        if (std::find(excluded.begin(), excluded.end(), id) == excluded.end())
        {
            pool.push_back(id);
        }
    }
    if (count > pool.size())
    {
        throw std::invalid_argument("attacker count " + std::to_string(count) +
                                    " exceeds the eligible pool of " +
                                    std::to_string(pool.size()) + " nodes");
    }
    const auto order = rng.Permutation(static_cast<uint32_t>(pool.size()));
    std::vector<NodeId> chosen;
    chosen.reserve(count);
    for (uint32_t i = 0; i < count; ++i)
    {
        chosen.push_back(pool[order[i]]);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

} // namespace mcast
