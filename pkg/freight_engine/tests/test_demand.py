import pytest

from freight_engine.demand.loader import load_demand
from freight_engine.demand.table import DemandTable, normalization_denominators
from freight_engine.errors import InvalidFieldValue, NegativeDemand, SelfLoopDemand, UnknownCentroid, ZeroDenominator
from freight_engine.schemas.network import Mode
from freight_engine.schemas.solver import UnitFactors
from freight_engine.tests.factories import TOY_DIR, intermodal_network


def _write(tmp_path, rows):
    path = tmp_path / "demand.csv"
    path.write_text("origin,destination,mode,units_per_day\n" + "\n".join(rows) + "\n", encoding="utf-8")
    return path


def test_load_toy_demand():
    demand = load_demand(TOY_DIR / "demand.csv", intermodal_network())
    assert demand.totals == {Mode.TRUCK: 120.0, Mode.RAIL: 15.0, Mode.INTERMODAL: 25.0}
    assert len(demand) == 3


def test_duplicate_rows_accumulate_and_zeros_drop(tmp_path):
    path = _write(tmp_path, ["0,1,truck,2", "0,1,truck,3", "0,1,rail,0"])
    demand = load_demand(path, intermodal_network())
    assert demand.get(0, 1, Mode.TRUCK) == 5.0
    assert len(demand) == 1


@pytest.mark.parametrize(
    "row, error",
    [
        ("0,1,truck,-1", NegativeDemand),
        ("0,0,truck,1", SelfLoopDemand),
        ("0,2,truck,1", UnknownCentroid),
        ("0,99,truck,1", UnknownCentroid),
        ("0,1,barge,1", InvalidFieldValue),
        ("0,1,truck,lots", InvalidFieldValue),
    ],
)
def test_invalid_rows(tmp_path, row, error):
    with pytest.raises(error):
        load_demand(_write(tmp_path, [row]), intermodal_network())


def test_iteration_order_is_origin_destination_mode():
    demand = DemandTable({
        (1, 0, Mode.TRUCK): 1.0,
        (0, 1, Mode.INTERMODAL): 1.0,
        (0, 1, Mode.TRUCK): 1.0,
        (0, 1, Mode.RAIL): 1.0,
    })
    assert demand.keys() == [
        (0, 1, Mode.TRUCK), (0, 1, Mode.RAIL), (0, 1, Mode.INTERMODAL), (1, 0, Mode.TRUCK),
    ]
    assert demand.origins() == [0, 1]


def test_normalization_denominators_with_factors():
    demand = DemandTable({(0, 1, Mode.TRUCK): 10.0, (0, 1, Mode.RAIL): 2.0, (0, 1, Mode.INTERMODAL): 4.0})
    denoms = normalization_denominators(demand, UnitFactors(im_truck_equiv=2.0, im_rail_equiv=0.5))
    assert denoms.road == 18.0
    assert denoms.rail == 4.0


def test_zero_denominator():
    demand = DemandTable({(0, 1, Mode.TRUCK): 10.0})
    with pytest.raises(ZeroDenominator, match="term=rail"):
        normalization_denominators(demand)
    assert normalization_denominators(demand, strict=False).rail == 0.0
