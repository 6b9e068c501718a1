# Command entry point: python main.py <command> [options]
from geodiscord.cli import cli


def main():
    cli()


if __name__ == "__main__":
    main()
