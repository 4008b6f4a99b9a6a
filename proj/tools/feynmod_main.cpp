// CLI entry point; wired up once the check registry lands.
int main() { return 2; }
