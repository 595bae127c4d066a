import json

import pytest

from goalrules import mine, parse_description, preprocess, preprocess_csv
from goalrules.datasets import (
    diabetes_database,
    diabetes_tables,
    save_tables,
    synthetic_tables,
    tertile_boundaries,
)

sklearn = pytest.importorskip("sklearn")


class TestTertiles:
    def test_two_ascending_cuts(self):
        cuts = tertile_boundaries(list(range(1, 10)))
        assert len(cuts) == 2
        assert cuts[0] < cuts[1]

    def test_concentrated_values_rejected(self):
        with pytest.raises(ValueError, match="concentrated"):
            tertile_boundaries([1.0] * 30)


class TestDiabetes:
    def test_tables_shape(self):
        rows, description = diabetes_tables()
        assert len(rows) == 442
        names = [c["name"] for c in description["columns"]]
        assert names == ["age", "sex", "bmi", "bp", "s1", "s2", "s3", "s4", "s5", "s6", "progression"]
        descs = parse_description(json.dumps(description))
        assert descs[-1].is_target
        assert descs[-1].values == ("Goal0", "Goal1", "Goal2")
        assert descs[1].kind == "categorical"  # sex has two codes

    def test_database_partitions_are_tertiles(self):
        pdb = diabetes_database()
        assert pdb.total == 442
        assert len(pdb.partition_sizes) == 3
        assert all(140 <= size <= 155 for size in pdb.partition_sizes)

    def test_catalog_layout(self):
        pdb = diabetes_database()
        assert len(pdb.catalog) == 29  # nine 3-bin columns + two sex codes
        names = pdb.catalog.names()
        for expected in ("AGE0", "SEX1", "BMI2", "S52"):
            assert expected in names

    def test_rows_roundtrip_through_files(self, tmp_path):
        rows, description = diabetes_tables()
        db = tmp_path / "d.csv"
        dbd = tmp_path / "d.dbd.json"
        save_tables(rows, description, db, dbd)
        pdb = preprocess_csv(db, dbd)
        assert pdb.records == diabetes_database().records


class TestSynthetic:
    def test_deterministic_per_seed(self):
        a = synthetic_tables(rows=50, seed=9)
        b = synthetic_tables(rows=50, seed=9)
        c = synthetic_tables(rows=50, seed=10)
        assert a == b
        assert a != c

    def test_encodes_and_mines(self):
        rows, description = synthetic_tables(rows=200, seed=4)
        descs = parse_description(json.dumps(description))
        pdb = preprocess(rows, descs)
        assert pdb.total == 200
        mine(pdb)  # should simply not blow up

    def test_rejects_degenerate_shapes(self):
        with pytest.raises(ValueError):
            synthetic_tables(rows=0)
        with pytest.raises(ValueError):
            synthetic_tables(continuous=0, categorical=0)
        with pytest.raises(ValueError):
            synthetic_tables(goals=1)
