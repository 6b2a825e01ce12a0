import threading
import time

import pytest
import uvicorn

from agentrxiv.archive import ArchiveStore
from agentrxiv.embedding import HashedEmbedding
from agentrxiv.service import create_app


@pytest.fixture
def embedder():
    return HashedEmbedding()


@pytest.fixture
def store(tmp_path):
    return ArchiveStore(tmp_path / "data")


class ServerThread:
    """Runs the archive service on an ephemeral localhost port."""

    def __init__(self, app):
        config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)
        self.url = None

    def start(self):
        self.thread.start()
        deadline = time.time() + 10
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        port = self.server.servers[0].sockets[0].getsockname()[1]
        self.url = f"http://127.0.0.1:{port}"
        return self

    def stop(self):
        self.server.should_exit = True
        self.thread.join(timeout=10)


@pytest.fixture
def live_server(store):
    server = ServerThread(create_app(store)).start()
    yield server
    server.stop()
