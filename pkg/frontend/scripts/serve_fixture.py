"""Start the real HTTP service around a rigged always-one-emotion model.

Usage: python3 serve_fixture.py PORT [EMOTION_CODE]

The output layer is biased so any utterance peaks on the requested emotion
(default 1, Joy), giving browser tests a deterministic live server.
"""

import sys

import uvicorn

from afeng.neural import CnnLstmModel, ModelConfig
from afeng.pipeline import EmotionBehaviorEngine
from afeng.service import create_app
from afeng.textprep import build_vocab


def main() -> None:
    port = int(sys.argv[1])
    label = int(sys.argv[2]) if len(sys.argv) > 2 else 1

    vocab = build_vocab([["hello", "world", "wonderful", "day"]])
    config = ModelConfig(
        vocab_size=vocab.size,
        embedding_dim=6,
        filter_widths=(2, 3),
        filters_per_width=3,
        hidden_size=5,
        dense_size=4,
        max_len=7,
        dropout_rate=0.0,
    )
    model = CnnLstmModel.initialize(config, seed=0)
    model.params["output/weight"][:] = 0.0
    model.params["output/bias"][:] = 0.0
    model.params["output/bias"][label] = 12.0

    engine = EmotionBehaviorEngine(
        model=model, vocab=vocab, checkpoint_sha256="0" * 64, seed=0
    )
    app = create_app(engine, static_dir="/nonexistent")
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="error")


if __name__ == "__main__":
    main()
