import numpy as np
import pytest

from ridgelet_sampler.domain import FiniteDomain, NodeIndex
from ridgelet_sampler.experiments import SyntheticSpec, gen_sine_dataset
from ridgelet_sampler.ridgelet import make_relu_table
from ridgelet_sampler.sampler import EmpiricalDistribution
from ridgelet_sampler.subnetwork import (
    FittedModel,
    dedup,
    design_matrix,
    empirical_risk,
    predict_on_support,
    ridge_fit,
    ridge_objective,
)

LAM = 1e-3


def instance(P=7, D=1, M=50, seed=0):
    dom = FiniteDomain(P, D)
    g = make_relu_table(P)
    emp = gen_sine_dataset(SyntheticSpec(P=P, D=D, M=M, seed=seed))
    return dom, g, emp


def uniform_nodes(dom, n, seed):
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, dom.P, size=(n, dom.D + 1))
    return [NodeIndex(a=tuple(r[: dom.D].tolist()), b=int(r[dom.D])) for r in draws]


class TestDedup:
    def test_all_identical(self):
        n = NodeIndex((1, 2), 0)
        ns = dedup([n, n, n, n])
        assert ns.N == 4 and ns.N_eff == 1

    def test_all_distinct(self):
        nodes = [NodeIndex((i,), 0) for i in range(5)]
        ns = dedup(nodes)
        assert ns.N_eff == 5 and ns.unique == tuple(nodes)

    def test_first_occurrence_order(self):
        n1, n2, n3 = NodeIndex((1,), 0), NodeIndex((2,), 1), NodeIndex((0,), 2)
        ns = dedup([n1, n2, n1, n3])
        assert ns.unique == (n1, n2, n3)

    def test_empty_allowed(self):
        ns = dedup([])
        assert ns.N == 0 and ns.N_eff == 0


class TestRidgeFit:
    def test_empty_model_is_zero_predictor(self):
        dom, g, emp = instance()
        model = ridge_fit(dedup([]), emp, g, dom, LAM)
        assert model.theta.shape == (0,)
        assert np.all(predict_on_support(model, emp, g, dom) == 0.0)
        expected = float(emp.probs @ emp.labels**2)
        assert empirical_risk(model, emp, g, dom) == pytest.approx(expected)

    def test_orthogonal_column_gets_zero_weight(self):
        # equal-probability pair with opposite labels; the a=0 column is
        # constant over the support, hence orthogonal to f under the
        # empirical weighting -> theta = 0
        dom = FiniteDomain(3, 1)
        g = make_relu_table(3)
        emp = EmpiricalDistribution(
            points=np.array([[0], [1]]),
            probs=np.array([0.5, 0.5]),
            labels=np.array([1.0, -1.0]),
            M=2,
        )
        model = ridge_fit([NodeIndex((0,), 0)], emp, g, dom, LAM)
        assert model.theta[0] == pytest.approx(0.0, abs=1e-15)

    def test_normal_equation_residual(self):
        dom, g, emp = instance(D=2, M=100, seed=1)
        nodes = dedup(uniform_nodes(dom, 40, seed=2))
        model = ridge_fit(nodes, emp, g, dom, LAM)
        phi = design_matrix(model.nodes, emp, g, dom)
        gram = phi.T @ (phi * emp.probs[:, None]) + LAM * np.eye(len(model.nodes))
        rhs = phi.T @ (emp.probs * emp.labels)
        assert np.linalg.norm(gram @ model.theta - rhs) < 1e-8

    def test_beats_zero_predictor_objective(self):
        dom, g, emp = instance(D=2, M=100, seed=3)
        nodes = dedup(uniform_nodes(dom, 30, seed=4))
        model = ridge_fit(nodes, emp, g, dom, LAM)
        zero = FittedModel(nodes=model.nodes, theta=np.zeros_like(model.theta), lambda_eff=LAM)
        assert ridge_objective(model, emp, g, dom) <= ridge_objective(
            zero, emp, g, dom
        ) + 1e-12

    def test_gradient_check_at_optimum(self):
        dom, g, emp = instance(D=1, M=40, seed=5)
        nodes = dedup(uniform_nodes(dom, 10, seed=6))
        model = ridge_fit(nodes, emp, g, dom, LAM)
        base = ridge_objective(model, emp, g, dom)
        for j in range(len(model.theta)):
            for eps in (1e-6, -1e-6):
                theta = model.theta.copy()
                theta[j] += eps
                perturbed = FittedModel(nodes=model.nodes, theta=theta, lambda_eff=LAM)
                assert ridge_objective(perturbed, emp, g, dom) >= base - 1e-10

    def test_superset_never_increases_objective(self):
        # padding theta with zeros is feasible, so the ridge optimum over a
        # superset of columns cannot be worse at fixed regularization
        dom, g, emp = instance(D=2, M=80, seed=7)
        nodes = uniform_nodes(dom, 25, seed=8)
        base_nodes = tuple(dict.fromkeys(nodes[:15]))
        super_nodes = tuple(dict.fromkeys(nodes))
        base = ridge_fit(base_nodes, emp, g, dom, LAM)
        sup = ridge_fit(super_nodes, emp, g, dom, LAM)
        assert ridge_objective(sup, emp, g, dom) <= ridge_objective(
            base, emp, g, dom
        ) + 1e-10

    def test_predictions_invariant_under_column_permutation(self):
        dom, g, emp = instance(D=1, M=60, seed=9)
        nodes = list(dict.fromkeys(uniform_nodes(dom, 12, seed=10)))
        model_a = ridge_fit(nodes, emp, g, dom, LAM)
        model_b = ridge_fit(nodes[::-1], emp, g, dom, LAM)
        np.testing.assert_allclose(
            predict_on_support(model_a, emp, g, dom),
            predict_on_support(model_b, emp, g, dom),
            atol=1e-12,
        )

    def test_invalid_regularizer(self):
        dom, g, emp = instance()
        with pytest.raises(ValueError):
            ridge_fit(dedup([]), emp, g, dom, 0.0)


class TestEmpiricalRisk:
    def test_matches_hand_rolled_loop(self):
        dom, g, emp = instance(P=3, D=1, M=12, seed=11)
        nodes = dedup(uniform_nodes(dom, 5, seed=12))
        model = ridge_fit(nodes, emp, g, dom, LAM)
        got = empirical_risk(model, emp, g, dom)
        scale = dom.P ** (-dom.D / 2.0)
        expected = 0.0
        for i in range(emp.K):
            pred = 0.0
            for node, theta in zip(model.nodes, model.theta):
                z = (
                    sum(int(a) * int(x) for a, x in zip(node.a, emp.points[i]))
                    - node.b
                ) % dom.P
                pred += theta * scale * g.values[z]
            expected += emp.probs[i] * (pred - emp.labels[i]) ** 2
        assert got == pytest.approx(expected, abs=1e-12)

    def test_exact_reproduction_gives_zero_risk(self):
        # single support point, single node: pick theta to match the label
        dom = FiniteDomain(3, 1)
        g = make_relu_table(3)
        emp = EmpiricalDistribution(
            points=np.array([[1]]), probs=np.array([1.0]), labels=np.array([0.7]), M=1
        )
        node = NodeIndex((1,), 0)
        column = dom.P ** (-dom.D / 2.0) * g.values[(1 * 1 - 0) % 3]
        model = FittedModel(
            nodes=(node,), theta=np.array([0.7 / column]), lambda_eff=LAM
        )
        assert empirical_risk(model, emp, g, dom) == pytest.approx(0.0, abs=1e-28)
