import subprocess
import sys
import os
from pathlib import Path

from config.settings import Settings


def run_api_server():
    """Run the FastAPI server"""
    print("Starting API server...")
    env = os.environ.copy()
    env["PYTHONPATH"] = str(project_root)
    return subprocess.Popen(
        [sys.executable, "-m", "uvicorn", "api.server:app",
         "--host", Settings.API_HOST, "--port", str(Settings.API_PORT)],
        env=env,
    )


if __name__ == "__main__":
    # Ensure we're in the project root directory
    project_root = Path(__file__).parent.absolute()
    os.chdir(project_root)

    server = run_api_server()

    print("\nAPI server started!")
    print(f"- API Documentation: http://{Settings.API_HOST}:{Settings.API_PORT}/docs")
    try:
        server.wait()
    except KeyboardInterrupt:
        server.terminate()
