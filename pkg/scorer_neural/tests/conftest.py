import pytest

from scorer_neural.config import ScorerConfig
from scorer_neural.data import Instance
from scorer_neural.model import fine_tune

POSITIVE = [
    "[Arg1] may increase the plasma concentration of [Arg2] .",
    "[Arg1] potentiates the anticoagulant effect of [Arg2] .",
    "Coadministration of [Arg1] with [Arg2] increased the risk of bleeding .",
]
NEGATIVE = [
    "Serum levels of [Arg1] and [Arg2] were measured at baseline .",
    "[Arg1] and [Arg2] are widely prescribed agents .",
    "Patients received [Arg1] or [Arg2] during the run-in phase .",
]


def make_instances(n, split="train"):
    out = []
    for i in range(n):
        positive = i % 2 == 0
        text = (POSITIVE if positive else NEGATIVE)[i % 3]
        out.append(
            Instance(
                instance_id=f"{split}.{i}",
                masked_text=text,
                label=1 if positive else 0,
                source="fixture",
                split=split,
            )
        )
    return out


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("tiny_model")
    config = ScorerConfig(
        pretrained_model="fresh-tiny", epochs=2, batch_size=4, max_seq_length=64
    )
    fine_tune(make_instances(16), make_instances(8, split="dev"), config, out)
    return out
