"""Per-module trainers: Adam loops over generated records, checkpoints, CSV logs."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from lgma import config
from lgma.codecs.language import LanguageCodec
from lgma.codecs.lexicon import END, Utterance
from lgma.codecs.soma import SomaCodec, normalize_rows
from lgma.codecs.vision import VisionCodec
from lgma.config import Config, named_rng
from lgma.cortex import BA1440, MT, SPL, SMA, Broca, PreSMA, Wernicke
from lgma.engine import tensor as T
from lgma.engine.adam import AdamState, adam_update
from lgma.orchestrator.resources import Resources


class DivergedLoss(RuntimeError):
    """Training loss went non-finite (or absurdly large); no checkpoint written."""


class SchemaMismatch(ValueError):
    """Dataset records do not carry the fields this module trains on."""


REQUIRED_KEYS = {
    "vision": {"x"},
    "language": {"idx", "zero"},
    "soma": {"m"},
    "wernicke": {"slv", "wlv"},
    "broca": {"wlv", "slv"},
    "mt": {"arm", "objs", "attn_idx", "tgt"},
    "spl": {"sv", "armcode"},
    "ba1440": {"svs", "q", "a"},
    "presma": {"ilv", "cmdlv"},
    "sma": {"cmd", "map", "cur", "start", "tsv"},
}

_MAX_LOSS = 1e9
_CLIP_NORM = 5.0


def _target_whitening(targets: np.ndarray, floor_frac: float = 0.05) -> np.ndarray:
    """Inverse-variance weights per target dimension, mean-normalized.

    Code-space targets concentrate in a small ball; whitening keeps the
    discriminative directions from being drowned by MSE on the large ones.
    """
    std = targets.reshape(-1, targets.shape[-1]).std(axis=0)
    std = np.maximum(std, floor_frac * float(std.max()) + 1e-8)
    w = 1.0 / (std * std)
    return (w / w.mean()).astype(np.float32)


def _lr_at(base: float, epoch: int, total: int) -> float:
    """Step decay: halve at 60% and again at 85% of the run."""
    lr = base
    if epoch >= 0.6 * total:
        lr *= 0.5
    if epoch >= 0.85 * total:
        lr *= 0.5
    return lr


def _check_schema(name: str, records) -> None:
    if not records:
        return
    missing = REQUIRED_KEYS[name] - set(records[0])
    if missing:
        raise SchemaMismatch(f"{name} dataset lacks fields {sorted(missing)}")


def _clip_grads(grads: dict[str, np.ndarray], max_norm: float = _CLIP_NORM) -> None:
    total = 0.0
    for g in grads.values():
        total += float((g.astype(np.float64) ** 2).sum())
    norm = np.sqrt(total)
    if norm > max_norm:
        scale = np.float32(max_norm / norm)
        for g in grads.values():
            g *= scale


def _step(params: dict, loss: T.Tensor, adam: AdamState) -> float:
    value = float(loss.data)
    if not np.isfinite(value) or value > _MAX_LOSS:
        raise DivergedLoss(f"loss {value}")
    for p in params.values():
        p.grad = None
    T.backward(loss)
    grads = {k: p.grad for k, p in params.items() if p.grad is not None}
    _clip_grads(grads)
    adam_update(adam, params, grads)
    return value


def _batches(n: int, batch: int, rng: np.random.Generator):
    order = rng.permutation(n)
    for i in range(0, n, batch):
        yield order[i:i + batch]


def _bucketed_batches(lengths, batch: int, rng: np.random.Generator):
    """Batches of same-length records, shuffled within and across buckets."""
    buckets: dict[int, list[int]] = {}
    for i, length in enumerate(lengths):
        buckets.setdefault(int(length), []).append(i)
    all_batches = []
    for _, idxs in sorted(buckets.items()):
        idxs = [idxs[j] for j in rng.permutation(len(idxs))]
        for i in range(0, len(idxs), batch):
            all_batches.append(np.array(idxs[i:i + batch]))
    order = rng.permutation(len(all_batches))
    for j in order:
        yield all_batches[j]


# ---------------------------------------------------------------------------
# trainers
# ---------------------------------------------------------------------------

def train_vision(records, cfg: Config, res: Resources):
    _check_schema("vision", records)
    rng = named_rng("train/vision", int(cfg["seed"]))
    codec = VisionCodec(named_rng("init/vision", int(cfg["seed"])))
    params = codec.params()
    adam = AdamState(lr=cfg.require_float("vision.lr"))
    X = np.stack([r["x"] for r in records]).astype(np.float32)
    noise = cfg.require_float("vision.code_noise")
    losses = []
    total_epochs = cfg.require_int("vision.epochs")
    for epoch in range(total_epochs):
        adam.lr = _lr_at(cfg.require_float("vision.lr"), epoch, total_epochs)
        epoch_loss = []
        for idx in _batches(len(X), cfg.require_int("vision.batch"), rng):
            xb = T.Tensor(X[idx])
            code_noise = rng.normal(0.0, noise, size=(len(idx), config.MODAL_DIM)
                                    ).astype(np.float32) if noise > 0 else None
            loss = codec.recon_loss(xb, code_noise,
                                    cfg.require_float("vision.active_weight"))
            epoch_loss.append(_step(params, loss, adam))
        losses.append(float(np.mean(epoch_loss)))
    codec.trained = True
    return codec, losses


def train_language(records, cfg: Config, res: Resources):
    _check_schema("language", records)
    rng = named_rng("train/language", int(cfg["seed"]))
    codec = LanguageCodec(res.lexicon, named_rng("init/language", int(cfg["seed"])))
    params = codec.params()
    adam = AdamState(lr=cfg.require_float("language.lr"))
    lexicon = res.lexicon
    words = lexicon.words
    tokens_per = [[words[int(i)] for i in r["idx"]] for r in records]
    zero_flags = np.array([float(r["zero"][0]) for r in records])
    lengths = [len(t) for t in tokens_per]
    mask_max = cfg.require_int("language.mask_max")
    noise = cfg.require_float("language.code_noise")
    losses = []
    total_epochs = cfg.require_int("language.epochs")
    for epoch in range(total_epochs):
        adam.lr = _lr_at(cfg.require_float("language.lr"), epoch, total_epochs)
        epoch_loss = []
        for idx in _bucketed_batches(lengths, cfg.require_int("language.batch"), rng):
            B = len(idx)
            frames = np.stack([
                np.concatenate([lexicon.frames_of(tokens_per[i]),
                                lexicon.frame(END)[None]])
                for i in idx
            ]).astype(np.float32)  # [B, L+1, 64]
            steps = frames.shape[1]
            lv = codec.encode_frames_t([T.Tensor(frames[:, k]) for k in range(steps)])
            # corruption: zero-records force lv to 0; others get masks + noise
            keep = np.ones((B, config.MODAL_DIM), dtype=np.float32)
            jitter = np.zeros((B, config.MODAL_DIM), dtype=np.float32)
            for row, i in enumerate(idx):
                if zero_flags[i]:
                    keep[row] = 0.0
                    continue
                if rng.random() < 0.5:
                    n = int(rng.integers(1, mask_max + 1))
                    keep[row, rng.choice(config.MODAL_DIM, size=n, replace=False)] = 0.0
                jitter[row] = rng.normal(0.0, noise, size=config.MODAL_DIM)
            lv = T.add(T.mul(lv, T.Tensor(keep)), T.Tensor(jitter * keep))
            teacher = [frames[:, k] for k in range(steps)]
            outs = codec.decode_steps_t(lv, teacher)
            loss = None
            for k, out in enumerate(outs):
                term = T.mse(out, T.Tensor(teacher[k]))
                loss = term if loss is None else T.add(loss, term)
            loss = T.scale(loss, 1.0 / steps)
            epoch_loss.append(_step(params, loss, adam))
        losses.append(float(np.mean(epoch_loss)))
    codec.trained = True
    return codec, losses


def train_soma(records, cfg: Config, res: Resources):
    _check_schema("soma", records)
    rng = named_rng("train/soma", int(cfg["seed"]))
    codec = SomaCodec(named_rng("init/soma", int(cfg["seed"])))
    params = codec.params()
    adam = AdamState(lr=cfg.require_float("soma.lr"))
    M = np.stack([normalize_rows(r["m"]).reshape(-1) for r in records])  # [N, 32]
    col_weight = np.array([1, 1, 6, 1, 1, 6, 4, 1], dtype=np.float32)
    col_weight = np.tile(col_weight / col_weight.mean(), config.BLOCK_T)
    weight_t = T.Tensor(col_weight)
    losses = []
    total_epochs = cfg.require_int("soma.epochs")
    for epoch in range(total_epochs):
        adam.lr = _lr_at(cfg.require_float("soma.lr"), epoch, total_epochs)
        epoch_loss = []
        for idx in _batches(len(M), cfg.require_int("soma.batch"), rng):
            mb = T.Tensor(M[idx])
            sv = codec.encode_flat_t(mb)
            jitter = rng.normal(0.0, 0.004, size=sv.data.shape).astype(np.float32)
            out = codec.decode_flat_t(T.add(sv, T.Tensor(jitter)))
            loss = T.mse(out, mb, weight=weight_t)
            epoch_loss.append(_step(params, loss, adam))
        losses.append(float(np.mean(epoch_loss)))
    codec.trained = True
    return codec, losses


def _train_unroll(name: str, records, cfg: Config, static_key: str, seq_key: str,
                  build):
    """Teacher-forced unroll: input concat(static, prev target), per-step MSE."""
    rng = named_rng(f"train/{name}", int(cfg["seed"]))
    module = build()
    net = module.net
    params = net.params()
    adam = AdamState(lr=cfg.require_float(f"{name}.lr"))
    lengths = [r[seq_key].shape[0] for r in records]
    losses = []
    total_epochs = cfg.require_int(f"{name}.epochs")
    for epoch in range(total_epochs):
        adam.lr = _lr_at(cfg.require_float(f"{name}.lr"), epoch, total_epochs)
        epoch_loss = []
        for idx in _bucketed_batches(lengths, cfg.require_int(f"{name}.batch"), rng):
            static = np.stack([records[i][static_key] for i in idx])
            seq = np.stack([records[i][seq_key] for i in idx])  # [B, L, 256]
            steps = seq.shape[1]
            B = len(idx)
            prev = np.zeros((B, config.MODAL_DIM), dtype=np.float32)
            xs = []
            for k in range(steps):
                xs.append(T.Tensor(np.concatenate([static, prev], axis=1)))
                prev = seq[:, k]
            head = next(iter(net.heads))
            outs = net.forward_steps(xs, head)
            loss = None
            for k, out in enumerate(outs):
                term = T.mse(out, T.Tensor(seq[:, k]))
                loss = term if loss is None else T.add(loss, term)
            loss = T.scale(loss, 1.0 / steps)
            epoch_loss.append(_step(params, loss, adam))
        losses.append(float(np.mean(epoch_loss)))
    net.trained = True
    return module, losses


def train_wernicke(records, cfg: Config, res: Resources):
    _check_schema("wernicke", records)
    return _train_unroll(
        "wernicke", records, cfg, "slv", "wlv",
        lambda: Wernicke(res.language, res.codebook,
                         named_rng("init/wernicke", int(cfg["seed"]))))


def train_presma(records, cfg: Config, res: Resources):
    _check_schema("presma", records)
    return _train_unroll(
        "presma", records, cfg, "ilv", "cmdlv",
        lambda: PreSMA(res.codebook, named_rng("init/presma", int(cfg["seed"]))))


def _train_seq2final(name: str, records, cfg: Config, seq_builder, target_key: str,
                     build, head: str):
    """Sequence in, one regression target at the final step."""
    rng = named_rng(f"train/{name}", int(cfg["seed"]))
    module = build()
    net = module.net
    params = net.params()
    adam = AdamState(lr=cfg.require_float(f"{name}.lr"))
    seqs = [seq_builder(r) for r in records]  # each [L, in_dim]
    lengths = [s.shape[0] for s in seqs]
    targets = np.stack([r[target_key] for r in records])
    weight = T.Tensor(_target_whitening(targets))
    losses = []
    total_epochs = cfg.require_int(f"{name}.epochs")
    for epoch in range(total_epochs):
        adam.lr = _lr_at(cfg.require_float(f"{name}.lr"), epoch, total_epochs)
        epoch_loss = []
        for idx in _bucketed_batches(lengths, cfg.require_int(f"{name}.batch"), rng):
            seq = np.stack([seqs[i] for i in idx])  # [B, L, in]
            xs = [T.Tensor(seq[:, k]) for k in range(seq.shape[1])]
            out = net.forward_final(xs)[head]
            loss = T.mse(out, T.Tensor(targets[idx]), weight=weight)
            epoch_loss.append(_step(params, loss, adam))
        losses.append(float(np.mean(epoch_loss)))
    net.trained = True
    return module, losses


def train_broca(records, cfg: Config, res: Resources):
    _check_schema("broca", records)
    end_lv = None

    def seq_builder(r):
        return r["wlv"]

    # append the end-marker lv to every word sequence
    codebook = res.codebook
    endv = codebook.lv(END).astype(np.float32)
    prepared = [{"wlv": np.concatenate([r["wlv"], endv[None]]), "slv": r["slv"]}
                for r in records]
    return _train_seq2final(
        "broca", prepared, cfg, seq_builder, "slv",
        lambda: Broca(res.language, res.codebook,
                      named_rng("init/broca", int(cfg["seed"]))),
        "sentence")


def train_spl(records, cfg: Config, res: Resources):
    _check_schema("spl", records)

    def seq_builder(r):
        return r["sv"][None]

    return _train_seq2final(
        "spl", records, cfg, seq_builder, "armcode",
        lambda: SPL(res.vision, named_rng("init/spl", int(cfg["seed"]))),
        "armcode")


def train_ba1440(records, cfg: Config, res: Resources):
    _check_schema("ba1440", records)

    def seq_builder(r):
        return np.concatenate([r["svs"], r["q"][None]])

    return _train_seq2final(
        "ba1440", records, cfg, seq_builder, "a",
        lambda: BA1440(named_rng("init/ba1440", int(cfg["seed"]))), "answer")


def train_sma(records, cfg: Config, res: Resources):
    _check_schema("sma", records)

    def seq_builder(r):
        return np.stack([r["cmd"], r["map"], r["cur"], r["start"]])

    return _train_seq2final(
        "sma", records, cfg, seq_builder, "tsv",
        lambda: SMA(named_rng("init/sma", int(cfg["seed"]))), "sv")


def train_mt(records, cfg: Config, res: Resources):
    _check_schema("mt", records)
    from lgma.orchestrator.datasets import mt_record_mask, mt_record_world
    from lgma.world import render_scene
    from lgma.cortex.mt import MT, N_FEATURES, pixel_features

    rng = named_rng("train/mt", int(cfg["seed"]))
    module = MT(res.vision, res.language, res.codebook,
                named_rng("init/mt", int(cfg["seed"])))
    params = module.params()
    adam = AdamState(lr=cfg.require_float("mt.lr"))
    words = res.lexicon.words
    attn_lvs = np.stack([res.codebook.lv(words[int(r["attn_idx"][0])])
                         for r in records]).astype(np.float32)
    # precompute what the gate sees at run time: the codec round trip
    worlds = [mt_record_world(r) for r in records]
    renders = np.stack([render_scene(w, "all") for w in worlds])
    masks = np.stack([mt_record_mask(r, w) for r, w in zip(records, worlds)])
    decoded = np.empty_like(renders)
    for i in range(0, len(renders), 256):
        codes = res.vision.encode_batch(renders[i:i + 256])
        decoded[i:i + 256] = res.vision.decode_batch(codes)
    feats = pixel_features(decoded)  # [N, P, 8]
    pixels = feats.shape[1]
    losses = []
    total_epochs = cfg.require_int("mt.epochs")
    batch = max(cfg.require_int("mt.batch") // 8, 8)
    for epoch in range(total_epochs):
        adam.lr = _lr_at(cfg.require_float("mt.lr"), epoch, total_epochs)
        epoch_loss = []
        for idx in _batches(len(records), batch, rng):
            f = T.Tensor(feats[idx].reshape(-1, N_FEATURES))
            gate = module.gate_t(f, T.Tensor(attn_lvs[idx]), pixels)
            target = masks[idx].reshape(-1, 1)
            weight = (1.0 + 25.0 * target).astype(np.float32)
            weight *= weight.size / weight.sum()
            loss = T.mse(gate, T.Tensor(target), weight=T.Tensor(weight))
            epoch_loss.append(_step(params, loss, adam))
        losses.append(float(np.mean(epoch_loss)))
    module.trained = True
    return module, losses


TRAINERS = {
    "vision": train_vision,
    "language": train_language,
    "soma": train_soma,
    "wernicke": train_wernicke,
    "broca": train_broca,
    "mt": train_mt,
    "spl": train_spl,
    "ba1440": train_ba1440,
    "presma": train_presma,
    "sma": train_sma,
}

CURRICULUM = ["vision", "language", "soma", "wernicke", "broca", "mt", "spl",
              "ba1440", "presma", "sma"]


def train_module(name: str, records, cfg: Config, res: Resources) -> tuple[Path, list[float]]:
    """Train one module, write its checkpoint and append its loss CSV."""
    if name not in TRAINERS:
        raise KeyError(f"unknown module {name!r}")
    module, losses = TRAINERS[name](records, cfg, res)
    ckpt_dir = cfg.path("checkpoint_dir")
    ckpt_dir.mkdir(parents=True, exist_ok=True)
    path = ckpt_dir / f"{name}.ckpt"
    saver = module if hasattr(module, "save") else module.net
    saver.save(path)
    log_path = ckpt_dir / f"{name}_loss.csv"
    new_file = not log_path.exists()
    with log_path.open("a", newline="") as fh:
        writer = csv.writer(fh)
        if new_file:
            writer.writerow(["epoch", "loss", "seed"])
        for epoch, loss in enumerate(losses):
            writer.writerow([epoch, f"{loss:.8f}", cfg["seed"]])
    res._cache.pop(name, None)
    return path, losses
