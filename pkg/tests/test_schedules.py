import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import eigensgd as es
from eigensgd.schedules import validate


class TestConstructors:
    def test_fixed(self):
        s = es.StepSchedule.fixed(0.01)
        assert s.step_at(0) == s.step_at(10**6) == 0.01

    def test_harmonic_values(self):
        s = es.StepSchedule.harmonic(0.5, 20.0)
        assert s.step_at(0) == pytest.approx(0.025)
        assert s.step_at(80) == pytest.approx(0.005)

    def test_polynomial_values(self):
        s = es.StepSchedule.polynomial(0.2, 5.0, 0.8)
        assert s.step_at(0) == pytest.approx(0.2 / 5.0**0.8)

    @pytest.mark.parametrize("ctor,args", [
        (es.StepSchedule.fixed, (0.0,)),
        (es.StepSchedule.fixed, (-1.0,)),
        (es.StepSchedule.harmonic, (0.0, 5.0)),
        (es.StepSchedule.harmonic, (1.0, 0.0)),
        (es.StepSchedule.polynomial, (1.0, 5.0, 0.5)),   # gamma at lower edge
        (es.StepSchedule.polynomial, (1.0, 5.0, 1.0)),   # gamma at upper edge
        (es.StepSchedule.polynomial, (-1.0, 5.0, 0.7)),
    ])
    def test_rejects_bad_parameters(self, ctor, args):
        with pytest.raises(ValueError):
            ctor(*args)

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            es.StepSchedule.fixed(0.1).step_at(-1)

    def test_describe_names_parameters(self):
        assert "harmonic" in es.StepSchedule.harmonic(1.0, 2.0).describe()
        assert "gamma" in es.StepSchedule.polynomial(1.0, 2.0, 0.7).describe()


@given(kind=st.sampled_from(["fixed", "harmonic", "polynomial"]),
       a=st.floats(0.01, 10.0), b=st.floats(0.5, 100.0),
       gamma=st.floats(0.51, 0.99), count=st.integers(1, 200))
@settings(max_examples=80, deadline=None)
def test_steps_matches_step_at_and_is_nonincreasing(kind, a, b, gamma, count):
    if kind == "fixed":
        s = es.StepSchedule.fixed(a)
    elif kind == "harmonic":
        s = es.StepSchedule.harmonic(a, b)
    else:
        s = es.StepSchedule.polynomial(a, b, gamma)
    arr = s.steps(count)
    assert arr.shape == (count,)
    assert np.all(arr > 0)
    assert np.all(np.diff(arr) <= 0)
    for k in (0, count // 2, count - 1):
        assert arr[k] == pytest.approx(s.step_at(k), rel=1e-15)


class TestValidate:
    def test_small_fixed_step_is_clean(self, small_consts):
        window = 2.0 / (small_consts.m * small_consts.l_tilde * small_consts.c_a**2)
        diags = validate(es.StepSchedule.fixed(window / 2), small_consts)
        assert diags == []

    def test_fixed_step_outside_window_is_flagged(self, small_consts):
        window = 2.0 / (small_consts.m * small_consts.l_tilde * small_consts.c_a**2)
        diags = validate(es.StepSchedule.fixed(window * 2), small_consts)
        codes = {d.code for d in diags}
        assert "fixed-step-outside-window" in codes

    def test_huge_step_triggers_both_warnings(self, small_consts):
        diags = validate(es.StepSchedule.fixed(10.0), small_consts)
        codes = {d.code for d in diags}
        assert "step-exceeds-half-inverse-smoothness" in codes
        assert "mean-recursion-noncontractive" in codes

    def test_decaying_warning_reports_reentry_iteration(self, small_consts):
        thresh = 1.0 / (2.0 * small_consts.m * small_consts.l_tilde)
        sched = es.StepSchedule.harmonic(1.0, 2.0)
        assert sched.step_at(0) > thresh  # premise of the test
        diags = validate(sched, small_consts, horizon=10**6)
        msgs = [d for d in diags if d.code == "step-exceeds-half-inverse-smoothness"]
        assert len(msgs) == 1
        k_ok = int(msgs[0].message.split("k < ")[1].split(";")[0])
        assert sched.step_at(k_ok) <= thresh < sched.step_at(k_ok - 1)
