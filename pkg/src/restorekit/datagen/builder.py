"""Paired dataset construction.

For each sample index the prompt is enriched with a name from the pool,
backend A generates the source (domain A) image and backend B refines it
into the target (domain B) image. Failed samples are logged to a sidecar
file and skipped; the manifest records only successes.

Output layout under out_dir:
    manifest.jsonl, domain_a/<id>.png, domain_b/<id>.png, failures.log
"""

import logging
from pathlib import Path

from ..core.images import save_image
from ..core.manifest import DatasetManifest, GeneratorParams, PairedSample, write_manifest
from ..errors import BackendFailureError, ToolkitError
from ..seeding import derive_seed
from .prompts import DEFAULT_TEMPLATE, NamePool, enrich_prompt

log = logging.getLogger(__name__)


def build_paired_dataset(
    backend_a,
    backend_b,
    names: NamePool,
    count: int,
    size: tuple,
    seed: int,
    out_dir,
    refine_params: GeneratorParams | None = None,
    template: str = DEFAULT_TEMPLATE,
) -> DatasetManifest:
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    refine_params = refine_params or GeneratorParams()
    out_dir = Path(out_dir)
    (out_dir / "domain_a").mkdir(parents=True, exist_ok=True)
    (out_dir / "domain_b").mkdir(parents=True, exist_ok=True)

    samples = []
    failures = []
    for i in range(count):
        sample_id = f"{i:06d}"
        sample_seed = derive_seed("sample", seed, i)
        prompt = enrich_prompt(template, names.name_for(i))
        try:
            source = backend_a.generate(prompt, sample_seed, size)
            target = backend_b.refine(
                source,
                prompt,
                guidance=refine_params.guidance,
                strength=refine_params.strength,
                steps=refine_params.steps,
                seed=sample_seed,
            )
            if target.shape != source.shape:
                raise BackendFailureError(
                    sample_id, f"refine changed shape {tuple(source.shape)} -> {tuple(target.shape)}"
                )
            src_rel = f"domain_a/{sample_id}.png"
            tgt_rel = f"domain_b/{sample_id}.png"
            save_image(source, out_dir / src_rel)
            save_image(target, out_dir / tgt_rel)
        except ToolkitError as exc:
            log.warning("sample %s failed: %s", sample_id, exc)
            failures.append(f"{sample_id}\t{exc}")
            continue
        samples.append(
            PairedSample(
                id=sample_id,
                source_path=src_rel,
                target_path=tgt_rel,
                prompt=prompt,
                seed=sample_seed,
                generator_params=refine_params,
            )
        )

    (out_dir / "failures.log").write_text(
        "".join(line + "\n" for line in failures), encoding="utf-8"
    )
    manifest = DatasetManifest(samples=samples, created_seed=seed, root=out_dir)
    write_manifest(manifest, out_dir / "manifest.jsonl")
    return manifest
