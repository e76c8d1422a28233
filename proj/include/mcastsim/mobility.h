/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_MOBILITY_H
#define MCASTSIM_MOBILITY_H

#include "mcastsim/random-source.h"
#include "mcastsim/sim-time.h"

#include <ostream>
#include <vector>

namespace mcast
{

struct Position
{
    double x{0.0};
    double y{0.0};

    bool operator==(const Position&) const = default;
};

double Distance(const Position& a, const Position& b);

struct MobilityConfig
{
    double areaWidth{1000.0};
    double areaHeight{1000.0};
    double vMin{0.0};
    double vMax{50.0};
    double pause{0.0};

    /// Throws std::invalid_argument on a violated constraint.
    void Validate() const;
    bool Contains(const Position& p) const;
    bool operator==(const MobilityConfig&) const = default;
};

/// Lowest speed a moving node draws; keeps zero-speed legs from freezing nodes.
constexpr double kMinMovingSpeed = 0.1;

/**
 * One random waypoint leg: the node sits at `start` from `departAt` until
 * `pauseUntil`, then travels in a straight line to `dest` at `speed`.
 * A leg with speed 0 is stationary forever.
 */
class Leg
{
  public:
    Leg() = default;
    Leg(const Position& start, const Position& dest, double speed, SimTime departAt,
        SimTime pauseUntil);

    const Position& Start() const
    {
        return m_start;
    }

    const Position& Dest() const
    {
        return m_dest;
    }

    double Speed() const
    {
        return m_speed;
    }

    SimTime DepartAt() const
    {
        return m_departAt;
    }

    SimTime PauseUntil() const
    {
        return m_pauseUntil;
    }

    SimTime ArrivalTime() const
    {
        return m_arrival;
    }

    /// Exactly Dest() from ArrivalTime() on.
    Position At(SimTime t) const;

  private:
    Position m_start;
    Position m_dest;
    double m_speed{0.0};
    SimTime m_departAt;
    SimTime m_pauseUntil;
    SimTime m_arrival{SimTime::Infinite()};
    double m_length{0.0};
};

/**
 * Random waypoint model for a fixed node population.
 *
 * Legs are generated lazily from a per-node random substream as queries move
 * forward in time, and kept so that any earlier instant can be answered again.
 */
class RandomWaypointMobility
{
  public:
    RandomWaypointMobility(const MobilityConfig& config, std::vector<Position> initial,
                           uint64_t masterSeed);

    Position PositionAt(NodeId node, SimTime t);

    /// Draws the leg a node starting at `from` at time `at` takes next.
    Leg NextLeg(const Position& from, SimTime at, RandomSource& rng) const;

    std::size_t NodeCount() const
    {
        return m_tracks.size();
    }

    const MobilityConfig& Config() const
    {
        return m_config;
    }

    /// Legs generated so far for a node.
    const std::vector<Leg>& Legs(NodeId node) const;

    /// CSV: node,depart_at,dest_x,dest_y,speed
    void WriteWaypointTrace(std::ostream& os) const;

  private:
    struct Track
    {
        RandomSource rng;
        std::vector<Leg> legs;
        std::size_t cursor{0};
    };

    const Leg& LegAt(Track& track, SimTime t);

    MobilityConfig m_config;
    std::vector<Track> m_tracks;
};

/// Uniform placement of n nodes over the configured area.
std::vector<Position> PlaceUniformly(std::size_t n, const MobilityConfig& config, RandomSource& rng);

} // namespace mcast

#endif // MCASTSIM_MOBILITY_H
