/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_BLACK_HOLE_H
#define MCASTSIM_BLACK_HOLE_H

#include "mcastsim/packet.h"
#include "mcastsim/random-source.h"
#include "mcastsim/sim-time.h"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcast
{

enum class DropMode : uint8_t
{
    Bulk,
    EveryN,
    EveryT,
    RandomP,
    PerDestination,
};

std::string_view ToString(DropMode mode);
/// Accepts bulk, every_n, every_t, random_p, per_destination.
std::optional<DropMode> ParseDropMode(std::string_view text);

/// What a per_destination attacker singles out.
struct DropTarget
{
    enum class Kind : uint8_t
    {
        Group,
        Source,
    };

    Kind kind{Kind::Group};
    uint32_t id{0};

    std::string ToString() const;
    /// "N" or "group:N" names a group, "source:N" a source node.
    static std::optional<DropTarget> Parse(std::string_view text);
    bool operator==(const DropTarget&) const = default;
};

struct AttackConfig
{
    DropMode mode{DropMode::Bulk};
    uint32_t everyN{1};
    double everyT{1.0};
    double probability{1.0};
    DropTarget target;
    bool forgeReplies{true};
    uint32_t attackerCount{0};

    void Validate() const;
    bool operator==(const AttackConfig&) const = default;
};

struct BlackHoleState
{
    uint64_t packetsSeen{0};
    uint64_t packetsDropped{0};
    uint64_t repliesForged{0};
    SimTime lastDropAt{SimTime::NegativeInfinite()};
};

/**
 * Black hole behavior attached to a compromised node.
 *
 * On hearing a route discovery it answers at once with a forged join reply
 * naming the request's previous hop, which pulls the forwarding group toward
 * itself. Data it would relay is then absorbed according to the drop policy.
 * Control traffic is otherwise handled normally by the protocol.
 */
class BlackHole
{
  public:
    BlackHole(NodeId self, const AttackConfig& config, RandomSource rng);

    /// Forged reply for a fresh join request; empty when forgery is disabled.
    std::optional<JoinReply> OnJoinRequest(const JoinRequest& jreq, SimTime t);

    /**
     * Called for data the node would otherwise forward. Every call counts as
     * a packet seen. every_n drops packets n, 2n, ...; every_t drops at most
     * one packet per t-second window, the first one included.
     */
    bool ShouldDrop(const DataPacket& pkt, SimTime t);

    NodeId Self() const
    {
        return m_self;
    }

    const BlackHoleState& State() const
    {
        return m_state;
    }

    const AttackConfig& Config() const
    {
        return m_config;
    }

  private:
    NodeId m_self;
    AttackConfig m_config;
    RandomSource m_rng;
    BlackHoleState m_state;
};

/**
 * Uniformly random subset of `count` nodes out of those not in `excluded`.
 * The eligible pool is shuffled with `rng` and its prefix taken, so for a
 * given rng state smaller selections are prefixes of larger ones.
 * Throws std::invalid_argument when count exceeds the pool.
 */
std::vector<NodeId> SelectAttackers(uint32_t nodeCount, std::span<const NodeId> excluded,
                                    uint32_t count, RandomSource& rng);

} // namespace mcast

#endif // MCASTSIM_BLACK_HOLE_H
