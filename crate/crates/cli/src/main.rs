fn main() {
    println!("lgt cli placeholder");
}
