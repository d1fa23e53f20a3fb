from .client import FixtureTransport, LiveTransport, SearchClient, TokenBucket
from .download import GifStore, build_manifest, download_all, download_gif, is_gif_payload
from .records import DatasetManifest, GifRecord, HashtagSeed, load_manifest, save_manifest
from .seeds import load_seed_file

__all__ = [
    "DatasetManifest",
    "FixtureTransport",
    "GifRecord",
    "GifStore",
    "HashtagSeed",
    "LiveTransport",
    "SearchClient",
    "TokenBucket",
    "build_manifest",
    "download_all",
    "download_gif",
    "is_gif_payload",
    "load_manifest",
    "load_seed_file",
    "save_manifest",
]
