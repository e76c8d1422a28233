/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/odmrp.h"

#include <cmath>
#include <stdexcept>

namespace mcast
{

void
ProtocolConfig::Validate() const
{
    if (!(jreqRefresh > 0.0) || !std::isfinite(jreqRefresh))
    {
        throw std::invalid_argument("join request refresh must be > 0");
    }
    if (!(fgLifetime > jreqRefresh) || !std::isfinite(fgLifetime))
    {
        throw std::invalid_argument("forwarding group lifetime must exceed the refresh period");
    }
    if (!(memberLifetime > 0.0) || !std::isfinite(memberLifetime))
    {
        throw std::invalid_argument("member entry lifetime must be > 0");
    }
    if (!(legitReplyDelay >= 0.0) || !std::isfinite(legitReplyDelay))
    {
        throw std::invalid_argument("reply delay must be >= 0");
    }
}

bool
MessageCache::Insert(NodeId source, uint32_t seq, PacketKind kind)
{
    const uint64_t key = Key(source, seq, kind);
    if (!m_set.insert(key).second)
    {
        return false;
    }
    m_order.push_back(key);
    if (m_order.size() > m_capacity)
    {
        m_set.erase(m_order.front());
        m_order.pop_front();
    }
    return true;
}

OdmrpProtocol::OdmrpProtocol(const ProtocolConfig& config, Simulator& sim, Radio& radio,
                             MetricsAccumulator& metrics, std::size_t nodeCount)
    : m_config(config),
      m_sim(sim),
      m_radio(radio),
      m_metrics(metrics)
{
    m_config.Validate();
    m_nodes.resize(nodeCount);
    for (std::size_t i = 0; i < nodeCount; ++i)
    {
        m_nodes[i].id = static_cast<NodeId>(i);
    }
}

void
OdmrpProtocol::MakeAttacker(NodeId node, const AttackConfig& attack)
{
    NodeState& st = State(node);
    if (!st.receiverOf.empty())
    {
        throw std::invalid_argument("a group receiver cannot be made an attacker");
    }
    st.attacker = true;
    m_attackers.insert_or_assign(
        node, BlackHole(node, attack, m_sim.Stream(RandomStream::AttackerPolicy, node)));
}

BlackHole*
OdmrpProtocol::Attacker(NodeId node)
{
    auto it = m_attackers.find(node);
    return it == m_attackers.end() ? nullptr : &it->second;
}

void
OdmrpProtocol::StartSource(NodeId node, GroupId group)
{
    NodeState& st = State(node);
    if (st.sourceOf.contains(group))
    {
        throw std::logic_error("node is already a source for the group");
    }
    st.sourceOf.insert(group);
    SourceSession& session = m_sessions[SessionKey(node, group)];
    session.active = true;
    ++session.generation;

    OriginateJoinRequest(node, group);
    m_sim.ScheduleIn(Seconds(m_config.jreqRefresh), EventKind::PeriodicJreq, node,
                     EventPayload{node, group, session.generation, nullptr});
    if (m_traffic.rate > 0.0 && m_sim.Now() < m_traffic.stopAt)
    {
        m_sim.ScheduleIn(SimTime(), EventKind::DataGeneration, node,
                         EventPayload{node, group, session.generation, nullptr});
    }
}

void
OdmrpProtocol::StopSource(NodeId node, GroupId group)
{
    State(node).sourceOf.erase(group);
    auto it = m_sessions.find(SessionKey(node, group));
    if (it != m_sessions.end())
    {
        it->second.active = false;
        ++it->second.generation;
    }
    m_sim.Trace("source_stop", node, {{"group", group}});
}

void
OdmrpProtocol::JoinReceiver(NodeId node, GroupId group)
{
    NodeState& st = State(node);
    if (st.attacker)
    {
        throw std::invalid_argument("an attacker cannot join as a receiver");
    }
    st.receiverOf.insert(group);
}

void
OdmrpProtocol::LeaveReceiver(NodeId node, GroupId group)
{
    NodeState& st = State(node);
    st.receiverOf.erase(group);
    st.members.erase(group);
    m_sim.Trace("receiver_leave", node, {{"group", group}});
}

uint32_t
OdmrpProtocol::ReceiverCount(GroupId group) const
{
    uint32_t n = 0;
    for (const auto& st : m_nodes)
    {
        n += st.receiverOf.contains(group) ? 1 : 0;
    }
    return n;
}

bool
OdmrpProtocol::IsForwarding(NodeId node, GroupId group, SimTime t) const
{
    const NodeState& st = State(node);
    auto it = st.fgRefreshedAt.find(group);
    // same arithmetic as the expiry event, so the two never disagree by an ulp
    return it != st.fgRefreshedAt.end() && t < it->second + Seconds(m_config.fgLifetime);
}

SimTime
OdmrpProtocol::ReplyDelay(NodeId node) const
{
    return State(node).attacker ? SimTime() : Seconds(m_config.legitReplyDelay);
}

void
OdmrpProtocol::CountControl(SimTime t)
{
    if (t >= m_traffic.warmup)
    {
        m_metrics.RecordControlPacket();
    }
}

void
OdmrpProtocol::HandleEvent(const Event& ev)
{
    switch (ev.kind)
    {
    case EventKind::PacketDelivery: {
        const Packet& pkt = *ev.payload.packet;
        if (const auto* jreq = std::get_if<JoinRequest>(&pkt.body))
        {
            HandleJoinRequest(ev.node, *jreq, ev.fireAt);
        }
        else if (const auto* jrep = std::get_if<JoinReply>(&pkt.body))
        {
            HandleJoinReply(ev.node, *jrep, ev.fireAt);
        }
        else
        {
            HandleData(ev.node, std::get<DataPacket>(pkt.body), ev.fireAt);
        }
        break;
    }
    case EventKind::PeriodicJreq: {
        auto it = m_sessions.find(SessionKey(ev.node, ev.payload.group));
        if (it == m_sessions.end() || !it->second.active ||
            it->second.generation != ev.payload.tag)
        {
            break;
        }
        OriginateJoinRequest(ev.node, ev.payload.group);
        m_sim.ScheduleIn(Seconds(m_config.jreqRefresh), EventKind::PeriodicJreq, ev.node,
                         ev.payload);
        break;
    }
    case EventKind::DataGeneration: {
        auto it = m_sessions.find(SessionKey(ev.node, ev.payload.group));
        if (it == m_sessions.end() || !it->second.active ||
            it->second.generation != ev.payload.tag || ev.fireAt >= m_traffic.stopAt)
        {
            break;
        }
        GenerateData(ev.node, ev.payload.group);
        const SimTime next = ev.fireAt + Seconds(1.0 / m_traffic.rate);
        if (next < m_traffic.stopAt)
        {
            m_sim.Schedule(next, EventKind::DataGeneration, ev.node, ev.payload);
        }
        break;
    }
    case EventKind::FgExpiryCheck: {
        NodeState& st = State(ev.node);
        const GroupId group = ev.payload.group;
        auto it = st.fgRefreshedAt.find(group);
        if (it == st.fgRefreshedAt.end())
        {
            m_expiryPending.erase(SessionKey(ev.node, group));
            break;
        }
        const SimTime lapse = it->second + Seconds(m_config.fgLifetime);
        if (ev.fireAt >= lapse)
        {
            st.fgRefreshedAt.erase(it);
            m_expiryPending.erase(SessionKey(ev.node, group));
            if (m_sim.Tracing())
            {
                m_sim.Trace("fg_expire", ev.node, {{"group", group}});
            }
        }
        else
        {
            m_sim.Schedule(lapse, EventKind::FgExpiryCheck, ev.node, ev.payload);
        }
        break;
    }
    case EventKind::SimEnd:
        break;
    }
}

void
OdmrpProtocol::OriginateJoinRequest(NodeId node, GroupId group)
{
    SourceSession& session = m_sessions[SessionKey(node, group)];
    const uint32_t seq = ++session.jreqSeq;
    NodeState& st = State(node);
    st.cache.Insert(node, seq, PacketKind::JoinRequest);

    auto pkt = std::make_shared<Packet>();
    pkt->body = JoinRequest{node, group, seq, node, 0};
    pkt->size = kJoinRequestSize;
    ++m_diag.jreqOriginated;
    CountControl(m_sim.Now());
    m_sim.Trace("jreq_orig", node, {{"group", group}, {"seq", seq}});
    m_radio.Broadcast(node, std::move(pkt));
}

void
OdmrpProtocol::HandleJoinRequest(NodeId node, const JoinRequest& jreq, SimTime t)
{
    NodeState& st = State(node);
    if (!st.cache.Insert(jreq.source, jreq.seq, PacketKind::JoinRequest))
    {
        ++m_diag.duplicatesDiscarded;
        return;
    }
    const uint32_t hops = jreq.hopCount + 1;
    st.routes[jreq.source] = RouteEntry{jreq.prevHop, jreq.seq, hops, t};
    if (m_sim.Tracing())
    {
        m_sim.Trace("jreq_rx", node,
                    {{"source", jreq.source},
                     {"group", jreq.group},
                     {"seq", jreq.seq},
                     {"prev_hop", jreq.prevHop},
                     {"hop_count", hops}});
    }

    if (BlackHole* bh = Attacker(node))
    {
        if (auto forged = bh->OnJoinRequest(jreq, t))
        {
            for (const auto& e : forged->entries)
            {
                st.cache.Insert(e.source, e.seq, PacketKind::JoinReply);
            }
            ++m_diag.jrepForged;
            if (m_sim.Tracing())
            {
                m_sim.Trace("jrep_forge", node,
                            {{"source", jreq.source}, {"seq", jreq.seq}, {"next_hop", jreq.prevHop}});
            }
            SendJoinReply(node, std::move(*forged), SimTime());
        }
    }

    auto fwd = std::make_shared<Packet>();
    fwd->body = JoinRequest{jreq.source, jreq.group, jreq.seq, node, hops};
    fwd->size = kJoinRequestSize;
    ++m_diag.jreqForwarded;
    CountControl(t);
    m_radio.Broadcast(node, std::move(fwd));

    if (st.receiverOf.contains(jreq.group) && jreq.source != node)
    {
        st.members[jreq.group][jreq.source] = MemberEntry{jreq.seq, t};
        OriginateJoinReply(node, jreq.group);
    }
}

std::optional<JoinReply>
OdmrpProtocol::OriginateJoinReply(NodeId node, GroupId group)
{
    NodeState& st = State(node);
    auto members = st.members.find(group);
    if (members == st.members.end())
    {
        return std::nullopt;
    }
    const SimTime now = m_sim.Now();
    JoinReply jrep;
    jrep.group = group;
    jrep.origin = node;
    for (const auto& [source, member] : members->second)
    {
        if ((now - member.heardAt).GetSeconds() >= m_config.memberLifetime)
        {
            continue;
        }
        auto route = st.routes.find(source);
        if (route == st.routes.end())
        {
            continue;
        }
        if (st.cache.Contains(source, route->second.seq, PacketKind::JoinReply))
        {
            continue;
        }
        jrep.entries.push_back(JoinReplyEntry{source, route->second.seq, route->second.upstream});
    }
    if (jrep.entries.empty())
    {
        return std::nullopt;
    }
    for (const auto& e : jrep.entries)
    {
        st.cache.Insert(e.source, e.seq, PacketKind::JoinReply);
    }
    ++m_diag.jrepOriginated;
    if (m_sim.Tracing())
    {
        const nlohmann::json entries = EntriesJson(jrep.entries);
        m_sim.Trace("jrep_orig", node, {{"group", group}, {"entries", entries}});
    }
    SendJoinReply(node, jrep, ReplyDelay(node));
    return jrep;
}

void
OdmrpProtocol::SendJoinReply(NodeId node, JoinReply jrep, SimTime delay)
{
    auto pkt = std::make_shared<Packet>();
    pkt->size = kJoinReplyHeaderSize +
                kJoinReplyEntrySize * static_cast<uint32_t>(jrep.entries.size());
    pkt->body = std::move(jrep);
    CountControl(m_sim.Now());
    m_radio.Broadcast(node, std::move(pkt), delay);
}

void
OdmrpProtocol::RefreshForwardingGroup(NodeId node, GroupId group, SimTime t)
{
    State(node).fgRefreshedAt[group] = t;
    if (m_sim.Tracing())
    {
        m_sim.Trace("fg_set", node, {{"group", group}});
    }
    if (m_expiryPending.insert(SessionKey(node, group)).second)
    {
        m_sim.Schedule(t + Seconds(m_config.fgLifetime), EventKind::FgExpiryCheck, node,
                       EventPayload{node, group, 0, nullptr});
    }
}

void
OdmrpProtocol::HandleJoinReply(NodeId node, const JoinReply& jrep, SimTime t)
{
    NodeState& st = State(node);
    JoinReply onward;
    onward.group = jrep.group;
    onward.origin = node;
    bool matched = false;
    for (const auto& e : jrep.entries)
    {
        if (e.nextHop != node)
        {
            continue;
        }
        matched = true;
        if (e.source == node)
        {
            // the path has reached its source
            continue;
        }
        auto route = st.routes.find(e.source);
        if (route == st.routes.end())
        {
            ++m_diag.staleRouteEntries;
            if (m_sim.Tracing())
            {
                m_sim.Trace("drop", node, {{"reason", "no_route"}, {"source", e.source}});
            }
            continue;
        }
        if (!st.cache.Insert(e.source, route->second.seq, PacketKind::JoinReply))
        {
            // upstream already refreshed for this round
            continue;
        }
        onward.entries.push_back(JoinReplyEntry{e.source, route->second.seq, route->second.upstream});
    }
    if (!matched)
    {
        return;
    }
    if (m_sim.Tracing())
    {
        const nlohmann::json entries = EntriesJson(jrep.entries);
        m_sim.Trace("jrep_rx", node,
                    {{"group", jrep.group}, {"origin", jrep.origin}, {"entries", entries}});
    }
    RefreshForwardingGroup(node, jrep.group, t);
    if (!onward.entries.empty())
    {
        ++m_diag.jrepForwarded;
        if (m_sim.Tracing())
        {
            const nlohmann::json entries = EntriesJson(onward.entries);
            m_sim.Trace("jrep_fwd", node, {{"group", jrep.group}, {"entries", entries}});
        }
        SendJoinReply(node, std::move(onward), ReplyDelay(node));
    }
}

void
OdmrpProtocol::GenerateData(NodeId node, GroupId group)
{
    SourceSession& session = m_sessions[SessionKey(node, group)];
    const uint32_t seq = ++session.dataSeq;
    const SimTime now = m_sim.Now();
    State(node).cache.Insert(node, seq, PacketKind::Data);
    if (Counted(now))
    {
        m_metrics.RecordGeneration(node, group, seq, now, ReceiverCount(group));
    }
    auto pkt = std::make_shared<Packet>();
    pkt->body = DataPacket{node, group, seq, now};
    pkt->size = m_traffic.packetSize;
    if (m_sim.Tracing())
    {
        m_sim.Trace("data_gen", node,
                    {{"group", group}, {"seq", seq}, {"counted", Counted(now)}});
    }
    m_radio.Broadcast(node, std::move(pkt));
}

void
OdmrpProtocol::HandleData(NodeId node, const DataPacket& pkt, SimTime t)
{
    NodeState& st = State(node);
    if (!st.cache.Insert(pkt.source, pkt.seq, PacketKind::Data))
    {
        ++m_diag.duplicatesDiscarded;
        return;
    }
    if (st.receiverOf.contains(pkt.group))
    {
        if (Counted(pkt.createdAt))
        {
            m_metrics.RecordDelivery(node, pkt.source, pkt.seq, pkt.createdAt, t);
        }
        if (m_sim.Tracing())
        {
            m_sim.Trace("data_deliver", node,
                        {{"source", pkt.source},
                         {"seq", pkt.seq},
                         {"created_at", pkt.createdAt.GetSeconds()},
                         {"counted", Counted(pkt.createdAt)}});
        }
    }
    if (!IsForwarding(node, pkt.group, t))
    {
        ++m_diag.fgExpiredDiscards;
        return;
    }
    if (BlackHole* bh = Attacker(node))
    {
        if (bh->ShouldDrop(pkt, t))
        {
            ++m_diag.attackerDrops;
            if (Counted(pkt.createdAt))
            {
                m_metrics.RecordAttackerDrop();
            }
            if (m_sim.Tracing())
            {
                m_sim.Trace("drop", node,
                            {{"reason", "attack"},
                             {"source", pkt.source},
                             {"seq", pkt.seq},
                             {"counted", Counted(pkt.createdAt)}});
            }
            return;
        }
    }
    ++m_diag.dataForwarded;
    if (m_sim.Tracing())
    {
        m_sim.Trace("data_fwd", node, {{"source", pkt.source}, {"seq", pkt.seq}});
    }
    auto fwd = std::make_shared<Packet>();
    fwd->body = pkt;
    fwd->size = m_traffic.packetSize;
    m_radio.Broadcast(node, std::move(fwd));
}

} // namespace mcast
