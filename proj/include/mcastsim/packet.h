/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_PACKET_H
#define MCASTSIM_PACKET_H

#include "mcastsim/sim-time.h"

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace mcast
{

/// Source-originated flood that advertises an active source and lays reverse paths.
struct JoinRequest
{
    NodeId source{0};
    GroupId group{0};
    uint32_t seq{0};
    NodeId prevHop{0};
    uint32_t hopCount{0};
};

/// One join-table row: "for this source (refresh round seq), my upstream is nextHop".
struct JoinReplyEntry
{
    NodeId source{0};
    uint32_t seq{0};
    NodeId nextHop{0};

    bool operator==(const JoinReplyEntry&) const = default;
};

struct JoinReply
{
    GroupId group{0};
    NodeId origin{0};
    std::vector<JoinReplyEntry> entries;
};

struct DataPacket
{
    NodeId source{0};
    GroupId group{0};
    uint32_t seq{0};
    SimTime createdAt;
};

enum class PacketKind : uint8_t
{
    JoinRequest,
    JoinReply,
    Data,
};

std::string_view ToString(PacketKind kind);

struct Packet
{
    std::variant<JoinRequest, JoinReply, DataPacket> body;
    uint32_t size{1};

    PacketKind GetKind() const
    {
        return static_cast<PacketKind>(body.index());
    }
};

/// Nominal on-air sizes in bytes; metadata only.
constexpr uint32_t kJoinRequestSize = 28;
constexpr uint32_t kJoinReplyHeaderSize = 12;
constexpr uint32_t kJoinReplyEntrySize = 12;

} // namespace mcast

#endif // MCASTSIM_PACKET_H
