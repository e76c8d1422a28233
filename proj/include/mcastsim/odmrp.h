/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_ODMRP_H
#define MCASTSIM_ODMRP_H

#include "mcastsim/black-hole.h"
#include "mcastsim/metrics.h"
#include "mcastsim/packet.h"
#include "mcastsim/radio.h"
#include "mcastsim/simulator.h"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

namespace mcast
{

struct ProtocolConfig
{
    /// Period of source join request floods, seconds.
    double jreqRefresh{3.0};
    /// A forwarding group flag lapses this long after its last refresh.
    double fgLifetime{9.0};
    /// A receiver stops answering for a source this long after its last request.
    double memberLifetime{9.0};
    /// Reply-building time of a legitimate node; attackers reply with none.
    double legitReplyDelay{0.001};

    void Validate() const;
    bool operator==(const ProtocolConfig&) const = default;
};

/// Constant-rate data generation attached to every active source.
struct TrafficConfig
{
    /// Packets per second per source; 0 disables data.
    double rate{0.0};
    uint32_t packetSize{512};
    /// No packet is generated at or after this instant.
    SimTime stopAt{SimTime::Infinite()};
    /// Packets created before this instant are excluded from metrics.
    SimTime warmup;
};

/// Bounded FIFO set of (source, seq, kind) triples used for duplicate detection.
class MessageCache
{
  public:
    static constexpr std::size_t kDefaultCapacity = 1024;

    explicit MessageCache(std::size_t capacity = kDefaultCapacity)
        : m_capacity(capacity)
    {
    }

    bool Contains(NodeId source, uint32_t seq, PacketKind kind) const
    {
        return m_set.contains(Key(source, seq, kind));
    }

    /// Returns false when the triple is already cached.
    bool Insert(NodeId source, uint32_t seq, PacketKind kind);

    std::size_t Size() const
    {
        return m_set.size();
    }

    std::size_t Capacity() const
    {
        return m_capacity;
    }

  private:
    static uint64_t Key(NodeId source, uint32_t seq, PacketKind kind)
    {
        return (static_cast<uint64_t>(source) << 34) | (static_cast<uint64_t>(kind) << 32) | seq;
    }

    std::size_t m_capacity;
    std::deque<uint64_t> m_order;
    std::unordered_set<uint64_t> m_set;
};

struct RouteEntry
{
    NodeId upstream{0};
    uint32_t seq{0};
    uint32_t hopCount{0};
    SimTime learnedAt;
};

struct MemberEntry
{
    uint32_t seq{0};
    SimTime heardAt;
};

struct NodeState
{
    NodeId id{0};
    MessageCache cache;
    /// source -> upstream learned from the first copy of its latest request
    std::map<NodeId, RouteEntry> routes;
    /// group -> source -> last request heard as a receiver
    std::map<GroupId, std::map<NodeId, MemberEntry>> members;
    /// group -> last forwarding group refresh
    std::map<GroupId, SimTime> fgRefreshedAt;
    std::set<GroupId> sourceOf;
    std::set<GroupId> receiverOf;
    bool attacker{false};
};

struct ProtocolDiagnostics
{
    uint64_t jreqOriginated{0};
    uint64_t jreqForwarded{0};
    uint64_t jrepOriginated{0};
    uint64_t jrepForwarded{0};
    uint64_t jrepForged{0};
    uint64_t staleRouteEntries{0};
    uint64_t duplicatesDiscarded{0};
    uint64_t fgExpiredDiscards{0};
    uint64_t dataForwarded{0};
    uint64_t attackerDrops{0};
};

/**
 * ODMRP state machines for every node of one run.
 *
 * Sources flood join requests every refresh period; each node keeps the
 * previous hop of the first copy it hears as its upstream toward that
 * source. Receivers answer with a join reply naming that upstream, and a
 * node named in a reply joins the forwarding group and passes the reply on
 * toward the source with its own upstream. Forwarding group members relay
 * each data packet once while their flag is fresh.
 */
class OdmrpProtocol
{
  public:
    OdmrpProtocol(const ProtocolConfig& config, Simulator& sim, Radio& radio,
                  MetricsAccumulator& metrics, std::size_t nodeCount);

    void SetTraffic(const TrafficConfig& traffic)
    {
        m_traffic = traffic;
    }

    /// Turns a node into a black hole. Attackers cannot be receivers.
    void MakeAttacker(NodeId node, const AttackConfig& attack);

    /// Originates a join request now and every refresh period until stopped; starts data.
    void StartSource(NodeId node, GroupId group);
    void StopSource(NodeId node, GroupId group);
    void JoinReceiver(NodeId node, GroupId group);
    /// Drops the member table for the group; no further replies or deliveries.
    void LeaveReceiver(NodeId node, GroupId group);

    /// Engine entry point.
    void HandleEvent(const Event& ev);

    void HandleJoinRequest(NodeId node, const JoinRequest& jreq, SimTime t);
    void HandleJoinReply(NodeId node, const JoinReply& jrep, SimTime t);
    void HandleData(NodeId node, const DataPacket& pkt, SimTime t);

    /**
     * Builds and broadcasts a reply with one entry per fresh source in the
     * member table not yet answered for its current round. Returns nothing,
     * and sends nothing, when no such source exists.
     */
    std::optional<JoinReply> OriginateJoinReply(NodeId node, GroupId group);

    void OriginateJoinRequest(NodeId node, GroupId group);
    void GenerateData(NodeId node, GroupId group);

    bool IsForwarding(NodeId node, GroupId group, SimTime t) const;
    uint32_t ReceiverCount(GroupId group) const;

    NodeState& State(NodeId node)
    {
        return m_nodes.at(node);
    }

    const NodeState& State(NodeId node) const
    {
        return m_nodes.at(node);
    }

    std::size_t NodeCount() const
    {
        return m_nodes.size();
    }

    BlackHole* Attacker(NodeId node);

    const ProtocolDiagnostics& Diagnostics() const
    {
        return m_diag;
    }

    const ProtocolConfig& Config() const
    {
        return m_config;
    }

  private:
    struct SourceSession
    {
        bool active{false};
        uint64_t generation{0};
        uint32_t jreqSeq{0};
        uint32_t dataSeq{0};
    };

    static uint64_t SessionKey(NodeId node, GroupId group)
    {
        return (static_cast<uint64_t>(node) << 32) | group;
    }

    SimTime ReplyDelay(NodeId node) const;
    void RefreshForwardingGroup(NodeId node, GroupId group, SimTime t);
    void SendJoinReply(NodeId node, JoinReply jrep, SimTime delay);
    void CountControl(SimTime t);
    bool Counted(SimTime createdAt) const
    {
        return createdAt >= m_traffic.warmup;
    }

    ProtocolConfig m_config;
    TrafficConfig m_traffic;
    Simulator& m_sim;
    Radio& m_radio;
    MetricsAccumulator& m_metrics;
    std::vector<NodeState> m_nodes;
    std::map<NodeId, BlackHole> m_attackers;
    std::map<uint64_t, SourceSession> m_sessions;
    std::set<uint64_t> m_expiryPending;
    ProtocolDiagnostics m_diag;
};

} // namespace mcast

#endif // MCASTSIM_ODMRP_H
