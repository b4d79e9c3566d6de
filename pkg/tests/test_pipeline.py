"""End-to-end report assembly and reproducibility."""
from fractions import Fraction

from chernslope.pipeline import run_pipeline
from chernslope.serialize import canonical_json, jsonable, rat


class TestSerialization:
    def test_rational_encoding(self):
        assert rat(Fraction(3, 7)) == {"num": "3", "den": "7"}

    def test_canonical_json_is_sorted_and_stable(self):
        payload = {"b": Fraction(1, 2), "a": [Fraction(3), {"x": 1}]}
        first = canonical_json(payload)
        second = canonical_json({"a": [Fraction(3), {"x": 1}], "b": Fraction(1, 2)})
        assert first == second

    def test_jsonable_handles_nested_containers(self):
        out = jsonable({"k": (Fraction(1, 3), [Fraction(2)])})
        assert out == {"k": [{"num": "1", "den": "3"}, [{"num": "2", "den": "1"}]]}


class TestRunPipeline:
    def test_byte_identical_reruns(self):
        kwargs = dict(target=Fraction(14, 5), epsilon=Fraction(4, 5),
                      family="APRIME", seed=2)
        assert run_pipeline(**kwargs).to_json() == run_pipeline(**kwargs).to_json()

    def test_sampled_leg_attaches_cover_invariants(self):
        result = run_pipeline(Fraction(14, 5), Fraction(4, 5), family="APRIME", seed=2)
        assert result.status == "ok"
        sampled = result.report["sampled"]
        assert sampled["method"] in ("rejection", "backtracking")
        assert (sampled["c1sq"] + sampled["c2"]) % 12 == 0
        assert sampled["nef"]["all_nonnegative"] in (True, False)

    def test_error_within_epsilon(self):
        result = run_pipeline(Fraction(3), Fraction(1, 10), family="A", seed=0,
                              sample=False)
        assert result.status == "ok"
        assert result.report["error"] < Fraction(1, 10)
        assert result.report["sampled"] is None

    def test_component_cap_skips_sampling(self):
        result = run_pipeline(Fraction(3), Fraction(1, 100), family="A", seed=0)
        assert result.status == "ok"
        assert "skipped" in result.report["sampled"]

    def test_node_cap_skips_sampling(self):
        result = run_pipeline(Fraction(5, 2), Fraction(1, 10), family="APRIME", seed=0)
        assert result.status == "ok"
        assert "skipped" in result.report["sampled"]

    def test_q_hint_is_respected(self):
        result = run_pipeline(Fraction(14, 5), Fraction(4, 5), family="APRIME",
                              seed=2, q_hint=8009)
        sampled = result.report["sampled"]
        assert sampled["q"] == 8009
