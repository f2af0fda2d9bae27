"""Hand-built dense network core: CNN-LSTM layers, backprop, Adadelta."""

from afeng.neural.adadelta import AdadeltaState, adadelta_step, clip_l2
from afeng.neural.checkpoint import load_checkpoint, save_checkpoint
from afeng.neural.model import CnnLstmModel, ModelConfig, backward, forward
from afeng.neural.train import TrainConfig, train

__all__ = [
    "AdadeltaState",
    "adadelta_step",
    "clip_l2",
    "CnnLstmModel",
    "ModelConfig",
    "forward",
    "backward",
    "TrainConfig",
    "train",
    "save_checkpoint",
    "load_checkpoint",
]
