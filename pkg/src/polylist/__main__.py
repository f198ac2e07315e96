from .cli import main_entrypoint

main_entrypoint()
