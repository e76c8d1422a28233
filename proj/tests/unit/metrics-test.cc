/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/metrics.h"
#include "mcastsim/simulator.h"

#include "support/properties.h"

#include <doctest.h>

#include <cmath>

using namespace mcast;

TEST_SUITE("metrics")
{
    TEST_CASE("expected deliveries follow the receiver count at generation")
    {
        MetricsAccumulator m;
        m.RecordGeneration(0, 0, 1, Seconds(1), 20);
        CHECK(m.Generated() == 1);
        CHECK(m.ExpectedDeliveries() == 20);
        m.RecordGeneration(0, 0, 2, Seconds(2), 0);
        CHECK(m.Generated() == 2);
        CHECK(m.ExpectedDeliveries() == 20);
    }

    TEST_CASE("100 packets to 30 receivers expect 3000 deliveries")
    {
        MetricsAccumulator m;
        for (uint32_t seq = 0; seq < 100; ++seq)
        {
            m.RecordGeneration(3, 0, seq, Seconds(seq * 0.25), 30);
        }
        CHECK(m.ExpectedDeliveries() == 3000);
    }

    TEST_CASE("generating the same packet twice faults")
    {
        MetricsAccumulator m;
        m.RecordGeneration(1, 0, 7, Seconds(1), 5);
        CHECK_THROWS_AS(m.RecordGeneration(1, 0, 7, Seconds(2), 5), SimulationFault);
        // a different source may reuse the number
        CHECK_NOTHROW(m.RecordGeneration(2, 0, 7, Seconds(2), 5));
    }

    TEST_CASE("a repeated delivery counts once")
    {
        MetricsAccumulator m;
        m.RecordGeneration(0, 0, 1, Seconds(1), 2);
        CHECK(m.RecordDelivery(5, 0, 1, Seconds(1), Seconds(1.004)));
        CHECK_FALSE(m.RecordDelivery(5, 0, 1, Seconds(1), Seconds(1.009)));
        CHECK(m.Delivered() == 1);
        CHECK(m.DeliveredTo(5) == 1);
        CHECK(m.DeliveredTo(6) == 0);
        CHECK(m.DelaySumSeconds() == doctest::Approx(0.004));
    }

    TEST_CASE("average delay is the mean over counted deliveries")
    {
        MetricsAccumulator m;
        m.RecordGeneration(0, 0, 1, Seconds(10), 2);
        m.RecordDelivery(4, 0, 1, Seconds(10), Seconds(10.005));
        m.RecordDelivery(8, 0, 1, Seconds(10), Seconds(10.015));
        const auto r = m.Finalize();
        REQUIRE(r.avgDelayMs.has_value());
        CHECK(*r.avgDelayMs == doctest::Approx(10.0));
        CHECK(r.pdr == 1.0);
        CHECK_FALSE(r.pdrUndefined);
    }

    TEST_CASE("nothing delivered gives zero PDR and no delay")
    {
        MetricsAccumulator m;
        m.RecordGeneration(0, 0, 1, Seconds(1), 3);
        const auto r = m.Finalize();
        CHECK(r.pdr == 0.0);
        CHECK_FALSE(r.pdrUndefined);
        CHECK_FALSE(r.avgDelayMs.has_value());
    }

    TEST_CASE("nothing expected flags the PDR as undefined")
    {
        MetricsAccumulator m;
        m.RecordGeneration(0, 0, 1, Seconds(1), 0);
        const auto r = m.Finalize();
        CHECK(r.pdr == 0.0);
        CHECK(r.pdrUndefined);
        CHECK_FALSE(r.avgDelayMs.has_value());
    }

    TEST_CASE("partial delivery ratio")
    {
        MetricsAccumulator m;
        for (uint32_t seq = 0; seq < 4; ++seq)
        {
            m.RecordGeneration(0, 0, seq, Seconds(seq), 2);
        }
        m.RecordDelivery(1, 0, 0, Seconds(0), Seconds(0.01));
        m.RecordDelivery(2, 0, 0, Seconds(0), Seconds(0.01));
        m.RecordDelivery(1, 0, 3, Seconds(3), Seconds(3.01));
        CHECK(m.Finalize().pdr == doctest::Approx(3.0 / 8.0));
    }

    TEST_CASE("delivery before creation faults")
    {
        MetricsAccumulator m;
        m.RecordGeneration(0, 0, 1, Seconds(5), 1);
        CHECK_THROWS_AS(m.RecordDelivery(1, 0, 1, Seconds(5), Seconds(4.9)), SimulationFault);
        // zero delay is allowed
        CHECK(m.RecordDelivery(1, 0, 1, Seconds(5), Seconds(5)));
    }

    TEST_CASE("delivery of an unknown packet faults")
    {
        MetricsAccumulator m;
        CHECK_THROWS_AS(m.RecordDelivery(1, 0, 99, Seconds(0), Seconds(1)), SimulationFault);
    }

    TEST_CASE("counters freeze after finalize")
    {
        MetricsAccumulator m;
        m.RecordGeneration(0, 0, 1, Seconds(1), 1);
        m.RecordAttackerDrop();
        m.RecordControlPacket();
        m.RecordControlPacket();
        const auto r = m.Finalize();
        CHECK(r.droppedByAttackers == 1);
        CHECK(r.controlOverhead == 2);
        CHECK(m.Frozen());
        CHECK_THROWS_AS(m.RecordGeneration(0, 0, 2, Seconds(2), 1), SimulationFault);
        CHECK_THROWS_AS(m.RecordDelivery(1, 0, 1, Seconds(1), Seconds(2)), SimulationFault);
        CHECK_THROWS_AS(m.RecordAttackerDrop(), SimulationFault);
        CHECK_THROWS_AS(m.RecordControlPacket(), SimulationFault);
    }

    TEST_CASE("echo is carried into the result")
    {
        MetricsAccumulator m;
        ScenarioEcho echo;
        echo.seed = 42;
        echo.attackMode = "bulk";
        const auto r = m.Finalize(echo);
        CHECK(r.echo.seed == 42);
        CHECK(r.echo.attackMode == "bulk");
    }

    TEST_CASE("traced runs recount to the reported totals")
    {
        const auto result = testing::CheckMetricsDedupAndCausality();
        INFO(result.detail);
        CHECK(result.passed);
    }
}
