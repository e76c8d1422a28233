/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_SIMULATOR_H
#define MCASTSIM_SIMULATOR_H

#include "mcastsim/packet.h"
#include "mcastsim/random-source.h"
#include "mcastsim/sim-time.h"
#include "mcastsim/trace.h"

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcast
{

/// Programming-error fault raised by the engine or by a model invariant check.
class SimulationFault : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

enum class EventKind : uint8_t
{
    PacketDelivery,
    PeriodicJreq,
    DataGeneration,
    FgExpiryCheck,
    SimEnd,
};

std::string_view ToString(EventKind kind);

struct EventPayload
{
    NodeId from{0};
    GroupId group{0};
    /// Generation counter or other kind-specific tag.
    uint64_t tag{0};
    std::shared_ptr<const Packet> packet;
};

struct Event
{
    SimTime fireAt;
    uint64_t seq{0};
    EventKind kind{EventKind::SimEnd};
    NodeId node{0};
    EventPayload payload;
};

using EventId = uint64_t;

/**
 * Sequential discrete-event engine.
 *
 * Events are processed in (fireAt, seq) order, seq being the insertion
 * counter, so simultaneous events run FIFO. A single handler receives every
 * event; it may schedule further events at or after the current clock.
 * The engine also owns the run's master seed and hands out independent
 * random substreams derived from it.
 */
class Simulator
{
  public:
    using Handler = std::function<void(const Event&)>;

    explicit Simulator(uint64_t seed = 1);

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;
    Simulator(Simulator&&) = default;
    Simulator& operator=(Simulator&&) = default;

    void SetHandler(Handler handler)
    {
        m_handler = std::move(handler);
    }

    /// Throws SimulationFault if `at` is before Now() or not finite.
    EventId Schedule(SimTime at, EventKind kind, NodeId node, EventPayload payload = {});

    EventId ScheduleIn(SimTime delay, EventKind kind, NodeId node, EventPayload payload = {})
    {
        return Schedule(m_now + delay, kind, node, std::move(payload));
    }

    /// Processes every event with fireAt <= end, then sets the clock to end.
    uint64_t RunUntil(SimTime end);

    SimTime Now() const
    {
        return m_now;
    }

    uint64_t GetSeed() const
    {
        return m_seed;
    }

    RandomSource Stream(RandomStream stream, uint64_t index = 0) const
    {
        return RandomSource::Derive(m_seed, stream, index);
    }

    std::size_t Pending() const
    {
        return m_heap.size();
    }

    uint64_t ProcessedCount() const
    {
        return m_processed;
    }

    /// Sequence number of the event currently being processed.
    uint64_t CurrentSeq() const
    {
        return m_currentSeq;
    }

    /// Running hash of (fireAt, seq, kind, node, from) over processed events.
    uint64_t TraceHash() const
    {
        return m_traceHash;
    }

    void SetTraceSink(TraceSink* sink)
    {
        m_trace = sink;
    }

    bool Tracing() const
    {
        return m_trace != nullptr;
    }

    /// Emits a record stamped with the current time and event seq. No-op when tracing is off.
    void Trace(std::string kind, NodeId node, nlohmann::json detail = nlohmann::json::object());

  private:
    // heap key; the event body lives in m_slots
    struct QueueEntry
    {
        SimTime fireAt;
        uint64_t seq;
        uint32_t slot;
    };

    struct Later
    {
        bool operator()(const QueueEntry& a, const QueueEntry& b) const
        {
            if (a.fireAt != b.fireAt)
            {
                return a.fireAt > b.fireAt;
            }
            return a.seq > b.seq;
        }
    };

    uint64_t m_seed;
    SimTime m_now;
    uint64_t m_nextSeq{0};
    uint64_t m_currentSeq{0};
    uint64_t m_processed{0};
    uint64_t m_traceHash{0xcbf29ce484222325ULL};
    std::vector<QueueEntry> m_heap;
    std::vector<Event> m_slots;
    std::vector<uint32_t> m_freeSlots;
    Handler m_handler;
    TraceSink* m_trace{nullptr};
};

} // namespace mcast

#endif // MCASTSIM_SIMULATOR_H
