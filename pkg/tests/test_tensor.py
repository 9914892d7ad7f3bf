import numpy as np
import pytest

from paxscore.tensor import (
	Tensor,
	ParamStore,
	AdamState,
	adam_step,
	grad_check,
	no_grad,
	add,
	mul,
	matmul,
	concat,
	gather,
	segment_sum,
	segment_softmax,
	swish,
	leaky_relu,
	tensor_sum,
	mean,
	smooth_l1,
)
from paxscore.exceptions import ShapeError, NumericError, GraphIndexError


def store(**values):
	params = ParamStore()
	for k, v in values.items():
		params.add(k, v)
	return params


class TestOps:
	def test_swish_zero(self):
		assert swish(Tensor([0.0])).item() == 0.0

	def test_swish_derivative(self):
		x = Tensor([1.0], requires_grad=True)
		tensor_sum(swish(x)).backward()

		h = 1e-6
		f = lambda v: v / (1.0 + np.exp(-v))
		numeric = (f(1.0 + h) - f(1.0 - h)) / (2 * h)
		np.testing.assert_allclose(x.grad, [numeric], rtol=1e-6)

	def test_segment_sum(self):
		out = segment_sum(Tensor([1.0, 2.0, 3.0]), np.array([0, 0, 1]), 2)
		np.testing.assert_array_equal(out.data, [3.0, 3.0])

	def test_segment_sum_bad_index(self):
		with pytest.raises(GraphIndexError):
			segment_sum(Tensor([1.0, 2.0]), np.array([0, 2]), 2)

	def test_segment_softmax_sums_to_one(self):
		values = Tensor([np.log(2.0), 0.0, 5.0, 1.0, -3.0])
		out = segment_softmax(values, np.array([0, 0, 1, 1, 1]), 2)
		np.testing.assert_allclose(out.data[:2], [2 / 3, 1 / 3])
		assert out.data[2:].sum() == pytest.approx(1.0)

	def test_gather_backward_accumulates(self):
		a = Tensor(np.ones((3, 2)), requires_grad=True)
		tensor_sum(gather(a, np.array([0, 0, 2]))).backward()
		np.testing.assert_array_equal(a.grad, [[2, 2], [0, 0], [1, 1]])

	def test_matmul_shape_error_names_op(self):
		with pytest.raises(ShapeError) as e:
			matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))
		assert e.value.op == 'matmul'

	def test_mul_shape_error(self):
		with pytest.raises(ShapeError):
			mul(Tensor(np.ones(3)), Tensor(np.ones(4)))

	def test_non_finite(self):
		with pytest.raises(NumericError):
			mul(Tensor([1e200]), Tensor([1e200]))

	def test_row_bias(self):
		x = Tensor(np.ones((4, 3)), requires_grad=True)
		b = Tensor(np.arange(3.0), requires_grad=True)
		tensor_sum(add(x, b)).backward()
		np.testing.assert_array_equal(b.grad, [4.0, 4.0, 4.0])

	def test_concat_backward(self):
		a = Tensor(np.ones((2, 1)), requires_grad=True)
		b = Tensor(np.ones((2, 2)), requires_grad=True)
		out = concat([a, b])
		assert out.shape == (2, 3)
		tensor_sum(mul(out, Tensor(np.arange(6.0).reshape(2, 3)))).backward()
		np.testing.assert_array_equal(a.grad, [[0.0], [3.0]])
		np.testing.assert_array_equal(b.grad, [[1.0, 2.0], [4.0, 5.0]])

	def test_leaky_relu(self):
		np.testing.assert_allclose(leaky_relu(Tensor([-2.0, 3.0]), 0.01).data, [-0.02, 3.0])

	def test_no_grad_records_nothing(self):
		x = Tensor([2.0], requires_grad=True)
		with no_grad():
			y = mul(x, x)
		assert y._parents == ()

	def test_shared_subexpression(self):
		x = Tensor([3.0], requires_grad=True)
		y = mul(x, x)
		tensor_sum(add(y, y)).backward()
		np.testing.assert_allclose(x.grad, [12.0])


class TestSmoothL1:
	def test_zero_residual(self):
		assert tensor_sum(smooth_l1(Tensor([1.0, 2.0]), [1.0, 2.0])).item() == 0.0

	def test_quadratic_branch(self):
		assert smooth_l1(Tensor([0.5]), [0.0], beta=1.0).item() == pytest.approx(0.125)

	def test_linear_branch(self):
		assert smooth_l1(Tensor([2.0]), [0.0], beta=1.0).item() == pytest.approx(1.5)

	def test_mean(self):
		loss = mean(smooth_l1(Tensor([0.5, 2.0]), [0.0, 0.0]))
		assert loss.item() == pytest.approx((0.125 + 1.5) / 2)


class TestParamStore:
	def test_size_and_names(self):
		params = store(w=np.zeros((2, 3)), b=np.zeros(3))
		assert params.size == 9
		assert params.names() == ['w', 'b']

	def test_duplicate(self):
		params = store(w=np.zeros(2))
		with pytest.raises(KeyError):
			params.add('w', np.zeros(2))

	def test_load_state_dict_shape(self):
		params = store(w=np.zeros(2))
		with pytest.raises(ShapeError):
			params.load_state_dict({'w': np.zeros(3)})

	def test_state_dict_is_a_copy(self):
		params = store(w=np.zeros(2))
		state = params.state_dict()
		params['w'].data += 1
		np.testing.assert_array_equal(state['w'], [0.0, 0.0])


class TestAdam:
	def test_first_step_is_lr_sized(self):
		params = store(w=np.array([1.0, -2.0, 0.5]))
		grads = {'w': np.array([0.3, -7.0, 1e-3])}
		adam_step(params, grads, AdamState(lr=0.1, eps=1e-12))
		np.testing.assert_allclose(params['w'].data, [0.9, -1.9, 0.4], atol=1e-6)

	def test_zero_gradient(self):
		params = store(w=np.array([1.0, 2.0]))
		adam_step(params, {'w': np.zeros(2)}, AdamState(lr=0.1))
		np.testing.assert_array_equal(params['w'].data, [1.0, 2.0])

	def test_two_steps_match_scalar_recurrence(self):
		params = store(w=np.array([0.7]))
		state = AdamState(lr=0.01)
		g = 0.25

		theta, m, v = 0.7, 0.0, 0.0
		for t in (1, 2):
			adam_step(params, {'w': np.array([g])}, state)
			m = 0.9 * m + 0.1 * g
			v = 0.999 * v + 0.001 * g * g
			theta -= 0.01 * (m / (1 - 0.9 ** t)) / (np.sqrt(v / (1 - 0.999 ** t)) + 1e-8)

		assert state.t == 2
		assert params['w'].data[0] == pytest.approx(theta, abs=1e-12)

	def test_gradient_shape(self):
		params = store(w=np.zeros(2))
		with pytest.raises(ShapeError):
			adam_step(params, {'w': np.zeros(3)}, AdamState())


class TestGradCheck:
	def test_quadratic(self):
		params = store(theta=np.array([3.0]))
		f = lambda: tensor_sum(mul(params['theta'], params['theta']))
		assert grad_check(f, params) < 1e-8
		np.testing.assert_allclose(params['theta'].grad, [6.0])

	def test_constant(self):
		params = store(theta=np.array([3.0, -1.0]))
		f = lambda: Tensor(np.array(5.0))
		assert grad_check(f, params) == 0.0
		np.testing.assert_array_equal(params.grads()['theta'], [0.0, 0.0])

	def test_composite(self):
		rng = np.random.default_rng(0)
		params = store(w=rng.normal(size=(3, 2)), b=rng.normal(size=2))
		x = Tensor(rng.normal(size=(4, 3)))
		f = lambda: mean(swish(add(matmul(x, params['w']), params['b'])))
		assert grad_check(f, params) < 1e-6

	def test_eps_range(self):
		params = store(theta=np.array([1.0]))
		with pytest.raises(ValueError):
			grad_check(lambda: tensor_sum(params['theta']), params, eps=1e-2)

	def test_non_finite(self):
		params = store(theta=np.array([1.0]))
		with pytest.raises(NumericError):
			grad_check(lambda: Tensor(np.array(np.inf)), params)


def weighted(out, seed=9):
	'''
	sum(out * w) with fixed random w, so every output element
	carries a distinct upstream gradient.
	'''
	w = np.random.default_rng(seed).normal(size=out.shape)
	return tensor_sum(mul(out, Tensor(w)))


class TestOpGradients:
	def setup_method(self):
		self.rng = np.random.default_rng(3)

	def test_mul(self):
		params = store(a=self.rng.normal(size=(3, 2)), b=self.rng.normal(size=(3, 2)))
		assert grad_check(lambda: weighted(mul(params['a'], params['b'])), params) < 1e-5

	def test_gather(self):
		params = store(a=self.rng.normal(size=(4, 3)))
		index = np.array([2, 0, 2, 3, 2])
		assert grad_check(lambda: weighted(gather(params['a'], index)), params) < 1e-5

	def test_concat(self):
		params = store(a=self.rng.normal(size=(3, 1)), b=self.rng.normal(size=(3, 4)))
		assert grad_check(lambda: weighted(concat([params['a'], params['b']])), params) < 1e-5

	def test_segment_sum(self):
		params = store(v=self.rng.normal(size=(6, 2)))
		segments = np.array([0, 2, 2, 1, 0, 2])
		assert grad_check(lambda: weighted(segment_sum(params['v'], segments, 4)), params) < 1e-5

	@pytest.mark.parametrize('shape', [(7,), (7, 1)])
	def test_segment_softmax(self, shape):
		params = store(v=self.rng.normal(size=shape))
		segments = np.array([0, 0, 1, 1, 1, 2, 0])
		assert grad_check(lambda: weighted(segment_softmax(params['v'], segments, 3)), params) < 1e-5

	def test_leaky_relu(self):
		x = self.rng.normal(size=(4, 3))
		x = np.sign(x) * (0.2 + np.abs(x))
		params = store(x=x)
		assert grad_check(lambda: weighted(leaky_relu(params['x'], 0.01)), params) < 1e-5

	@pytest.mark.parametrize('offset', [0.3, 2.5])
	def test_smooth_l1_branches(self, offset):
		target = self.rng.normal(size=5)
		signs = np.array([1.0, -1.0, 1.0, -1.0, 1.0])
		params = store(p=target + signs * offset)
		f = lambda: weighted(smooth_l1(params['p'], target, beta=1.0))
		assert grad_check(f, params) < 1e-5
