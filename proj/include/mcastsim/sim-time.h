/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_SIM_TIME_H
#define MCASTSIM_SIM_TIME_H

#include <compare>
#include <cstdint>
#include <limits>

namespace mcast
{

using NodeId = uint32_t;
using GroupId = uint32_t;

/**
 * Simulated time in seconds.
 *
 * Used both for absolute instants and for durations. Absolute instants handed
 * to the event queue must be finite and non-negative; the simulator enforces
 * this when an event is scheduled.
 */
class SimTime
{
  public:
    constexpr SimTime() = default;

    static constexpr SimTime FromSeconds(double s)
    {
        SimTime t;
        t.m_seconds = s;
        return t;
    }

    static constexpr SimTime Infinite()
    {
        return FromSeconds(std::numeric_limits<double>::infinity());
    }

    static constexpr SimTime NegativeInfinite()
    {
        return FromSeconds(-std::numeric_limits<double>::infinity());
    }

    constexpr double GetSeconds() const
    {
        return m_seconds;
    }

    constexpr double GetMilliSeconds() const
    {
        return m_seconds * 1000.0;
    }

    constexpr SimTime operator+(SimTime o) const
    {
        return FromSeconds(m_seconds + o.m_seconds);
    }

    constexpr SimTime operator-(SimTime o) const
    {
        return FromSeconds(m_seconds - o.m_seconds);
    }

    constexpr SimTime& operator+=(SimTime o)
    {
        m_seconds += o.m_seconds;
        return *this;
    }

    constexpr SimTime operator*(double k) const
    {
        return FromSeconds(m_seconds * k);
    }

    constexpr auto operator<=>(const SimTime&) const = default;

  private:
    double m_seconds{0.0};
};

constexpr SimTime
Seconds(double s)
{
    return SimTime::FromSeconds(s);
}

constexpr SimTime
MilliSeconds(double ms)
{
    return SimTime::FromSeconds(ms / 1000.0);
}

} // namespace mcast

#endif // MCASTSIM_SIM_TIME_H
