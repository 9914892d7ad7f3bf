from .tensor import (
	Tensor,
	no_grad,
	add,
	scale,
	mul,
	matmul,
	transpose,
	reshape,
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
from .params import ParamStore
from .optim import AdamState, adam_step
from .gradcheck import grad_check
