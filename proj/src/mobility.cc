/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/mobility.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcast
{

double
Distance(const Position& a, const Position& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

void
MobilityConfig::Validate() const
{
    if (!(areaWidth > 0.0) || !(areaHeight > 0.0))
    {
        throw std::invalid_argument("area dimensions must be > 0");
    }
    if (!(vMin >= 0.0) || !(vMax >= vMin) || !std::isfinite(vMax))
    {
        throw std::invalid_argument("speeds must satisfy 0 <= v_min <= v_max");
    }
    if (!(pause >= 0.0) || !std::isfinite(pause))
    {
        throw std::invalid_argument("pause must be >= 0");
    }
}

bool
MobilityConfig::Contains(const Position& p) const
{
    return p.x >= 0.0 && p.x <= areaWidth && p.y >= 0.0 && p.y <= areaHeight;
}

Leg::Leg(const Position& start, const Position& dest, double speed, SimTime departAt,
         SimTime pauseUntil)
    : m_start(start),
      m_dest(dest),
      m_speed(speed),
      m_departAt(departAt),
      m_pauseUntil(pauseUntil),
      m_length(Distance(start, dest))
{
    m_arrival = speed > 0.0 ? pauseUntil + Seconds(m_length / speed) : SimTime::Infinite();
}

Position
Leg::At(SimTime t) const
{
    if (t <= m_pauseUntil || m_speed <= 0.0)
    {
        return m_start;
    }
    if (t >= m_arrival)
    {
        return m_dest;
    }
    const double f = (t - m_pauseUntil).GetSeconds() * m_speed / m_length;
    if (f >= 1.0)
    {
        return m_dest;
    }
    return Position{m_start.x + (m_dest.x - m_start.x) * f, m_start.y + (m_dest.y - m_start.y) * f};
}

RandomWaypointMobility::RandomWaypointMobility(const MobilityConfig& config,
                                               std::vector<Position> initial,
                                               uint64_t masterSeed)
    : m_config(config)
{
    m_config.Validate();
    m_tracks.reserve(initial.size());
    for (std::size_t i = 0; i < initial.size(); ++i)
    {
        if (!m_config.Contains(initial[i]))
        {
            throw std::invalid_argument("initial position of node " + std::to_string(i) +
                                        " lies outside the area");
        }
        Track track{RandomSource::Derive(masterSeed, RandomStream::Mobility, i), {}, 0};
        track.legs.push_back(NextLeg(initial[i], SimTime(), track.rng));
        m_tracks.push_back(std::move(track));
    }
}

Leg
RandomWaypointMobility::NextLeg(const Position& from, SimTime at, RandomSource& rng) const
{
    const SimTime pauseUntil = at + Seconds(m_config.pause);
    if (m_config.vMax <= 0.0)
    {
        return Leg(from, from, 0.0, at, pauseUntil);
    }
    const Position dest{rng.Uniform() * m_config.areaWidth, rng.Uniform() * m_config.areaHeight};
    const double lo = std::min(std::max(m_config.vMin, kMinMovingSpeed), m_config.vMax);
    // (lo, vMax]: the upper bound is reachable, the lower bound is not
    const double speed = m_config.vMax - rng.Uniform() * (m_config.vMax - lo);
    return Leg(from, dest, speed, at, pauseUntil);
}

const Leg&
RandomWaypointMobility::LegAt(Track& track, SimTime t)
{
    while (track.legs.back().ArrivalTime() <= t)
    {
        const Leg& last = track.legs.back();
        Leg next = NextLeg(last.Dest(), last.ArrivalTime(), track.rng);
        track.legs.push_back(next);
    }
    // fast path for non-decreasing queries
    std::size_t c = track.cursor;
    if (c < track.legs.size() && track.legs[c].DepartAt() <= t &&
        (c + 1 == track.legs.size() || t < track.legs[c + 1].DepartAt()))
    {
        return track.legs[c];
    }
    auto it = std::upper_bound(track.legs.begin(), track.legs.end(), t,
                               [](SimTime v, const Leg& leg) { return v < leg.DepartAt(); });
    c = it == track.legs.begin() ? 0 : static_cast<std::size_t>(it - track.legs.begin()) - 1;
    track.cursor = c;
    return track.legs[c];
}

Position
RandomWaypointMobility::PositionAt(NodeId node, SimTime t)
{
    Position p = LegAt(m_tracks.at(node), t).At(t);
    p.x = std::clamp(p.x, 0.0, m_config.areaWidth);
    p.y = std::clamp(p.y, 0.0, m_config.areaHeight);
    return p;
}

const std::vector<Leg>&
RandomWaypointMobility::Legs(NodeId node) const
{
    return m_tracks.at(node).legs;
}

void
RandomWaypointMobility::WriteWaypointTrace(std::ostream& os) const
{
    os << "node,depart_at,dest_x,dest_y,speed\n";
    for (std::size_t i = 0; i < m_tracks.size(); ++i)
    {
        for (const auto& leg : m_tracks[i].legs)
        {
            os << i << ',' << leg.DepartAt().GetSeconds() << ',' << leg.Dest().x << ','
               << leg.Dest().y << ',' << leg.Speed() << '\n';
        }
    }
}

std::vector<Position>
PlaceUniformly(std::size_t n, const MobilityConfig& config, RandomSource& rng)
{
    std::vector<Position> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        out.push_back(Position{rng.Uniform() * config.areaWidth, rng.Uniform() * config.areaHeight});
    }
    return out;
}

} // namespace mcast
