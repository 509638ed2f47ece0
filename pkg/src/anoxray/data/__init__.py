from anoxray.data.manifest import (
    Label,
    ImageRecord,
    DatasetManifest,
    ManifestError,
    load_manifest,
    build_split,
)
from anoxray.data.images import (
    ImageTensor,
    PreprocessConfig,
    to_grayscale,
    resize,
    normalize,
    denormalize,
    apply_mask,
    preprocess,
    load_image,
    load_mask,
    save_png,
    save_tensor,
    load_tensor,
)
from anoxray.data.synth import SyntheticConfig, synth_generate

__all__ = [
    "Label",
    "ImageRecord",
    "DatasetManifest",
    "ManifestError",
    "load_manifest",
    "build_split",
    "ImageTensor",
    "PreprocessConfig",
    "to_grayscale",
    "resize",
    "normalize",
    "denormalize",
    "apply_mask",
    "preprocess",
    "load_image",
    "load_mask",
    "save_png",
    "save_tensor",
    "load_tensor",
    "SyntheticConfig",
    "synth_generate",
]
